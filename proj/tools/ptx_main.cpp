// ptx: evolve, replay and analyse light-seeking CTRNN robots with
// motor-driven sensory interference.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime or
// numeric error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "manifest.hpp"
#include "ptx/ptx.hpp"

namespace fs = std::filesystem;
using namespace ptx;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  auto v = parse_double(s);
  if (!v) throw UsageError(what + ": '" + s + "' is not a number");
  return *v;
}

TimeWindow parse_window(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--window expects START,END");
  return {to_number(parts[0], "--window"), to_number(parts[1], "--window")};
}

// "onset=8,rise=0.1,peak=2,fall=0.5,plateau=0.5,end=20,baseline=0"; "zero"
// gives a signal that is identically 0.
StimulusScript parse_script(const std::string& spec) {
  StimulusScript s;
  if (spec == "zero" || spec.empty()) return s;
  for (const auto& item : split(spec, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("script item '" + item + "' is not key=value");
    const auto key = item.substr(0, eq);
    const double v = to_number(item.substr(eq + 1), "script " + key);
    if (key == "baseline") s.baseline = v;
    else if (key == "onset") s.onset = v;
    else if (key == "rise") s.rise = v;
    else if (key == "peak") s.peak = v;
    else if (key == "fall") s.fall = v;
    else if (key == "plateau") s.plateau = v;
    else if (key == "end") s.end = v;
    else throw UsageError("unknown script key '" + key + "'");
  }
  return s;
}

struct SidePair {
  bool left = false;
  bool right = false;
};

SidePair parse_sides(const std::string& s, const std::string& flag) {
  if (s == "none") return {};
  if (s == "left") return {true, false};
  if (s == "right") return {false, true};
  if (s == "both") return {true, true};
  throw UsageError(flag + " expects none, left, right or both");
}

PopulationFile load_population(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("population file '" + path + "' does not exist");
  return population_from_json(cli::read_file(path));
}

std::size_t select_member(const PopulationFile& file, const std::string& selector, std::size_t threads) {
  const auto& members = file.population.members;
  if (selector == "best") return best_member_index(members, file.config.trial, threads, file.config.light_radius);
  std::size_t idx = 0;
  auto res = std::from_chars(selector.data(), selector.data() + selector.size(), idx);
  if (res.ec != std::errc{} || res.ptr != selector.data() + selector.size())
    throw UsageError("--member expects 'best' or a member index, got '" + selector + "'");
  if (idx >= members.size())
    throw UsageError("member " + selector + " does not exist (population has " + std::to_string(members.size()) +
                     " members)");
  return idx;
}

std::vector<std::size_t> select_lights(const std::string& selector) {
  std::vector<std::size_t> out;
  if (selector == "all") {
    for (std::size_t p = 1; p <= 12; ++p) out.push_back(p);
    return out;
  }
  for (const auto& item : split(selector, ',')) {
    std::size_t p = 0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), p);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size() || p < 1 || p > 12)
      throw UsageError("--lights expects 'all' or clock positions 1-12, got '" + item + "'");
    out.push_back(p);
  }
  return out;
}

std::vector<std::string> argv_vector(int argc, char** argv) { return {argv, argv + argc}; }

struct PerturbFlags {
  std::string lesion = "none";
  std::string deactivate = "none";

  void apply(PerturbationSpec& p) const {
    const auto lesioned = parse_sides(lesion, "--lesion-interference");
    const auto dark = parse_sides(deactivate, "--deactivate-sensor");
    if (lesioned.left) p.interference_gain_left = 0.0;
    if (lesioned.right) p.interference_gain_right = 0.0;
    if (dark.left) p.sensor_enabled_left = false;
    if (dark.right) p.sensor_enabled_right = false;
  }
};

int cmd_defaults() {
  std::cout << to_ini(EvolutionConfig{});
  return 0;
}

struct EvolveArgs {
  std::string config;
  std::string out;
  std::string from;
  std::optional<std::uint64_t> generations;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::size_t progress = 0;
};

int cmd_evolve(const EvolveArgs& a, const std::vector<std::string>& argv) {
  std::ifstream in(a.config);
  if (!in) throw UsageError("cannot open config '" + a.config + "'");
  EvolutionConfig cfg;
  apply_config(parse_config(in), cfg);
  if (a.generations) cfg.generations = *a.generations;
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();

  std::optional<Population> initial;
  if (!a.from.empty()) {
    auto ancestor = load_population(a.from);
    if (ancestor.config.trial.network.neurons != cfg.trial.network.neurons)
      throw ConfigError("ancestral population network size differs from the configuration");
    ancestor.population.rng_seed = cfg.seed;
    initial = std::move(ancestor.population);
  }
  const std::size_t threads = resolve_threads(a.threads);
  auto result = evolve(cfg, std::move(initial), threads, [&](const Population&, const GenerationRecord& rec) {
    if (a.progress && (rec.generation + 1) % a.progress == 0)
      std::cerr << "generation " << rec.generation << " best " << format_double(rec.best) << " mean "
                << format_double(rec.mean) << '\n';
    return true;
  });

  const fs::path dir(a.out);
  cli::Manifest manifest("evolve", argv);
  manifest.set("seed", cfg.seed);
  manifest.set("config", to_ini(cfg));
  if (!a.from.empty()) manifest.set("ancestor", a.from);
  manifest.emit(dir / "population.json", population_to_json(result.population, cfg));
  manifest.emit(dir / "history.csv", history_to_csv(result.history));
  manifest.finish(dir / "manifest.json");
  if (!result.history.empty())
    std::cout << "generations " << result.history.size() << " final best " << format_double(result.history.back().best)
              << '\n';
  return 0;
}

struct SimulateArgs {
  std::string population;
  std::string member = "best";
  std::string lights = "all";
  std::optional<double> duration;
  PerturbFlags perturb;
  std::string out;
  std::size_t threads = 0;
};

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& argv) {
  const auto file = load_population(a.population);
  const std::size_t threads = resolve_threads(a.threads);
  const auto positions = select_lights(a.lights);
  const std::size_t idx = select_member(file, a.member, threads);
  const auto& genome = file.population.members[idx];

  TrialConfig cfg = file.config.trial;
  if (a.duration) cfg.duration = *a.duration;
  cfg.log = true;
  a.perturb.apply(cfg.perturbation);
  const auto clock = probe_lights_clock(file.config.light_radius, 12);

  const fs::path dir(a.out);
  cli::Manifest manifest("simulate", argv);
  manifest.set("seed", file.population.rng_seed);
  manifest.set("config", to_ini(file.config));
  manifest.set("member_index", idx);
  manifest.set("member_id", genome.id);

  std::ostringstream summary;
  summary << "position,light_x,light_y,final_distance,fitness\n";
  for (auto p : positions) {
    cfg.light = clock[p - 1];
    auto r = run_trial(genome, cfg);
    manifest.emit(dir / ("light_" + std::to_string(p) + ".csv"), r.log->to_string());
    summary << p << ',' << format_double(cfg.light->x) << ',' << format_double(cfg.light->y) << ','
            << format_double(*r.final_distance) << ',' << format_double(r.fitness->value) << '\n';
  }
  manifest.emit(dir / "summary.csv", summary.str());
  manifest.finish(dir / "manifest.json");
  std::cout << "member " << idx << " (id " << genome.id << ")\n" << summary.str();
  return 0;
}

struct ProbeArgs {
  std::string population;
  std::string member = "best";
  std::string script_left;
  std::string script_right;
  std::optional<double> duration;
  PerturbFlags perturb;
  std::string out;
  std::size_t threads = 0;
};

int cmd_probe(const ProbeArgs& a, const std::vector<std::string>& argv) {
  const auto file = load_population(a.population);
  const std::size_t idx = select_member(file, a.member, resolve_threads(a.threads));
  TrialConfig cfg = file.config.trial;
  if (a.duration) cfg.duration = *a.duration;
  cfg.light.reset();
  cfg.log = true;
  a.perturb.apply(cfg.perturbation);
  if (!a.script_left.empty()) cfg.perturbation.script_left = parse_script(a.script_left);
  if (!a.script_right.empty()) cfg.perturbation.script_right = parse_script(a.script_right);
  try {
    cfg.perturbation.validate(cfg.duration);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  auto r = run_trial(file.population.members[idx], cfg);
  const fs::path out(a.out);
  cli::Manifest manifest("probe", argv);
  manifest.set("seed", file.population.rng_seed);
  manifest.set("config", to_ini(file.config));
  manifest.set("member_index", idx);
  manifest.emit(out, r.log->to_string());
  manifest.finish(fs::path(out.string() + ".manifest.json"));
  return 0;
}

struct StatsArgs {
  std::vector<std::string> logs;
  std::string window;
  std::string out;
  std::string samples;
};

std::string stats_table(const PooledMotorStats& s, TimeWindow w) {
  std::ostringstream os;
  os << "# quantile=linear interpolation between closest ranks, h=(n-1)q\n";
  os << "# window=" << format_double(w.start) << ',' << format_double(w.end) << '\n';
  os << "motor,count,min,whisker_low,q1,median,mean,q3,whisker_high,max\n";
  auto row = [&](const char* name, const MotorStats& m) {
    os << name << ',' << m.count << ',' << format_double(m.min) << ',' << format_double(m.whisker_low) << ','
       << format_double(m.q1) << ',' << format_double(m.median) << ',' << format_double(m.mean) << ','
       << format_double(m.q3) << ',' << format_double(m.whisker_high) << ',' << format_double(m.max) << '\n';
  };
  row("m_left", s.left);
  row("m_right", s.right);
  return os.str();
}

int cmd_stats(const StatsArgs& a) {
  const auto window = parse_window(a.window);
  std::vector<TimeSeries> logs;
  for (const auto& path : a.logs) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open log '" + path + "'");
    logs.push_back(TimeSeries::read(in));
  }
  const auto pooled = pooled_motor_stats(logs, window);
  const auto table = stats_table(pooled, window);
  if (a.out.empty()) std::cout << table;
  else cli::write_atomic(a.out, table);
  if (!a.samples.empty()) {
    TimeSeries samples({"m_left", "m_right"});
    for (std::size_t i = 0; i < pooled.left_samples.size(); ++i)
      samples.append(std::vector<double>{pooled.left_samples[i], pooled.right_samples[i]});
    cli::write_atomic(a.samples, samples.to_string());
  }
  return 0;
}

struct ClassifyArgs {
  std::string log;
  std::string window;
  std::string light;
  OrbitThresholds thresholds;
};

int cmd_classify(const ClassifyArgs& a) {
  const auto window = parse_window(a.window);
  std::ifstream in(a.log);
  if (!in) throw UsageError("cannot open log '" + a.log + "'");
  const auto log = TimeSeries::read(in);
  std::optional<std::pair<double, double>> light;
  if (!a.light.empty()) {
    auto parts = split(a.light, ',');
    if (parts.size() != 2) throw UsageError("--light expects X,Y");
    light = std::pair{to_number(parts[0], "--light"), to_number(parts[1], "--light")};
  }
  const auto label = classify_orbit(log, window, light, a.thresholds);
  std::cout << "label=" << to_string(label.type) << " forward_fraction=" << format_double(label.forward_fraction)
            << " sign_changes=" << label.sign_changes << " median_distance=" << format_double(label.median_distance)
            << " max_distance=" << format_double(label.max_distance) << '\n';
  return 0;
}

void add_perturb_flags(CLI::App* cmd, PerturbFlags& f) {
  cmd->add_option("--lesion-interference", f.lesion, "Remove interference: none|left|right|both");
  cmd->add_option("--deactivate-sensor", f.deactivate, "Force sensor reading to 0: none|left|right|both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptx: light-seeking CTRNN robots with motor-driven sensory interference"};
  app.require_subcommand(1);

  app.add_subcommand("defaults", "Print the default configuration");

  EvolveArgs ev;
  auto* evolve_cmd = app.add_subcommand("evolve", "Evolve a population with the microbial GA");
  evolve_cmd->add_option("config", ev.config, "Configuration file")->required();
  evolve_cmd->add_option("--out", ev.out, "Output directory")->required();
  evolve_cmd->add_option("--from", ev.from, "Start from this population file (descendant run)");
  evolve_cmd->add_option("--generations", ev.generations, "Override evolution.generations");
  evolve_cmd->add_option("--seed", ev.seed, "Override evolution.seed");
  evolve_cmd->add_option("--threads", ev.threads, "Worker threads (default: $PTX_THREADS or all cores)");
  evolve_cmd->add_option("--progress", ev.progress, "Report every N generations on stderr");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Replay a member against clock-position lights");
  sim_cmd->add_option("--population", sim.population, "Population file")->required();
  sim_cmd->add_option("--member", sim.member, "'best' or member index");
  sim_cmd->add_option("--lights", sim.lights, "'all' or comma-separated clock positions 1-12");
  sim_cmd->add_option("--duration", sim.duration, "Trial duration (default: evolved duration)");
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads for best-member selection");
  add_perturb_flags(sim_cmd, sim.perturb);

  ProbeArgs probe;
  auto* probe_cmd = app.add_subcommand("probe", "Drive sensors with scripted stimuli (no light)");
  probe_cmd->add_option("--population", probe.population, "Population file")->required();
  probe_cmd->add_option("--member", probe.member, "'best' or member index");
  probe_cmd->add_option("--script-left", probe.script_left, "Left stimulus, e.g. onset=8,rise=0.1,peak=2,fall=0.5,plateau=0.5");
  probe_cmd->add_option("--script-right", probe.script_right, "Right stimulus (same syntax)");
  probe_cmd->add_option("--duration", probe.duration, "Trial duration (default: evolved duration)");
  probe_cmd->add_option("--out", probe.out, "Output log file")->required();
  probe_cmd->add_option("--threads", probe.threads, "Worker threads for best-member selection");
  add_perturb_flags(probe_cmd, probe.perturb);

  StatsArgs st;
  auto* stats_cmd = app.add_subcommand("stats", "Motor statistics pooled over logs");
  stats_cmd->add_option("logs", st.logs, "Trial log files")->required();
  stats_cmd->add_option("--window", st.window, "START,END in time units")->required();
  stats_cmd->add_option("--out", st.out, "Write the statistics table here instead of stdout");
  stats_cmd->add_option("--samples", st.samples, "Write the pooled raw samples here");

  ClassifyArgs cl;
  auto* classify_cmd = app.add_subcommand("classify", "Classify the orbit type of a trial log");
  classify_cmd->add_option("log", cl.log, "Trial log file")->required();
  classify_cmd->add_option("--window", cl.window, "START,END in time units")->required();
  classify_cmd->add_option("--light", cl.light, "X,Y light position (default: from the log header)");
  classify_cmd->add_option("--forward-fraction", cl.thresholds.forward_fraction, "Type 2 forward fraction threshold");
  classify_cmd->add_option("--sign-changes", cl.thresholds.sign_changes, "Type 1 minimum net-motor sign changes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto args = argv_vector(argc, argv);
  try {
    if (app.got_subcommand("defaults")) return cmd_defaults();
    if (evolve_cmd->parsed()) return cmd_evolve(ev, args);
    if (sim_cmd->parsed()) return cmd_simulate(sim, args);
    if (probe_cmd->parsed()) return cmd_probe(probe, args);
    if (stats_cmd->parsed()) return cmd_stats(st);
    if (classify_cmd->parsed()) return cmd_classify(cl);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
