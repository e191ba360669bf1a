#pragma once

// Flat key-value configuration with one [section] per module.
//
//   [interference]
//   kind = squared
//   lambda = 0.5
//
// '#' and ';' start comments. Errors carry the offending line number.

#include <charconv>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ptx/error.hpp"
#include "ptx/evolution.hpp"
#include "ptx/interference.hpp"
#include "ptx/table.hpp"

namespace ptx {

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;  // 0 when not read from a file
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
};

using ConfigDocument = std::vector<ConfigSection>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::string where(const ConfigEntry& e) {
  return e.line ? "line " + std::to_string(e.line) + ": " : std::string("config: ");
}

inline double as_double(const ConfigEntry& e) {
  auto v = parse_double(e.value);
  if (!v) throw ConfigError(where(e) + e.key + " expects a number, got '" + e.value + "'");
  return *v;
}

inline std::uint64_t as_uint(const ConfigEntry& e) {
  std::uint64_t v = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || e.value.empty())
    throw ConfigError(where(e) + e.key + " expects a non-negative integer, got '" + e.value + "'");
  return v;
}

inline bool as_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(where(e) + e.key + " expects true/false, got '" + e.value + "'");
}

}  // namespace detail

inline ConfigDocument parse_config(std::istream& in) {
  ConfigDocument doc;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      auto name = detail::trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      doc.push_back({std::string(name), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (doc.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key outside of any [section]");
    auto key = detail::trim(line.substr(0, eq));
    auto value = line.substr(eq + 1);
    if (auto hash = value.find('#'); hash != std::string_view::npos) value = value.substr(0, hash);
    value = detail::trim(value);
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    doc.back().entries.push_back({std::string(key), std::string(value), line_no});
  }
  return doc;
}

inline ConfigDocument parse_config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

// Overlays the document onto `cfg`. Unknown sections or keys are errors.
inline void apply_config(const ConfigDocument& doc, EvolutionConfig& cfg) {
  using namespace detail;
  auto& trial = cfg.trial;
  for (const auto& section : doc) {
    for (const auto& e : section.entries) {
      const std::string& k = e.key;
      bool known = true;
      if (section.name == "world") {
        if (k == "radius") trial.world.radius = as_double(e);
        else if (k == "epsilon") trial.world.epsilon = as_double(e);
        else if (k == "dt") trial.world.dt = as_double(e);
        else if (k == "sensor_offset_left") trial.world.sensor_offset_left = as_double(e);
        else if (k == "sensor_offset_right") trial.world.sensor_offset_right = as_double(e);
        else known = false;
      } else if (section.name == "network") {
        if (k == "neurons") trial.network.neurons = as_uint(e);
        else if (k == "omega_max") trial.network.omega_max = as_double(e);
        else if (k == "omega_input") trial.network.omega_input = as_double(e);
        else known = false;
      } else if (section.name == "interference") {
        auto& spec = trial.interference;
        if (k == "kind") {
          auto kind = parse_interference_kind(e.value);
          if (!kind)
            throw ConfigError(where(e) + "unknown interference kind '" + e.value +
                              "' (null, sigmoidal, squared, sinusoidal)");
          spec.kind = *kind;
        } else if (k == "lambda") spec.lambda = as_double(e);
        else if (k == "k") spec.k = as_double(e);
        else if (k == "p") spec.p = as_double(e);
        else if (k == "b") spec.b = as_double(e);
        else if (k == "r_freq") spec.r_freq = as_double(e);
        else if (k == "phase_left") spec.initial_phase_left = as_double(e);
        else if (k == "phase_right") spec.initial_phase_right = as_double(e);
        else known = false;
      } else if (section.name == "trial") {
        if (k == "duration") trial.duration = as_double(e);
        else if (k == "start_x") trial.initial_state.x = as_double(e);
        else if (k == "start_y") trial.initial_state.y = as_double(e);
        else if (k == "start_alpha") trial.initial_state.alpha = as_double(e);
        else known = false;
      } else if (section.name == "evolution") {
        if (k == "population") cfg.population_size = as_uint(e);
        else if (k == "generations") cfg.generations = as_uint(e);
        else if (k == "mutation_sigma") cfg.mutation_sigma = as_double(e);
        else if (k == "mutation_rate") cfg.mutation_rate = as_double(e);
        else if (k == "lights_per_generation") cfg.lights_per_generation = as_uint(e);
        else if (k == "light_radius") cfg.light_radius = as_double(e);
        else if (k == "seed") cfg.seed = as_uint(e);
        else if (k == "centre_crossing") cfg.centre_crossing = as_bool(e);
        else known = false;
      } else {
        throw ConfigError(where(e) + "unknown section [" + section.name + "]");
      }
      if (!known) throw ConfigError(where(e) + "unknown key '" + k + "' in [" + section.name + "]");
    }
  }
}

inline EvolutionConfig load_config(std::istream& in) {
  EvolutionConfig cfg;
  apply_config(parse_config(in), cfg);
  try {
    cfg.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(std::string("invalid configuration: ") + err.what());
  }
  return cfg;
}

inline ConfigDocument to_document(const EvolutionConfig& cfg) {
  const auto& t = cfg.trial;
  const auto d = [](double v) { return format_double(v); };
  const auto u = [](std::uint64_t v) { return std::to_string(v); };
  auto sec = [](std::string name, std::vector<std::pair<std::string, std::string>> kv) {
    ConfigSection s{std::move(name), {}};
    for (auto& [k, v] : kv) s.entries.push_back({std::move(k), std::move(v), 0});
    return s;
  };
  return {
      sec("world", {{"radius", d(t.world.radius)},
                    {"epsilon", d(t.world.epsilon)},
                    {"dt", d(t.world.dt)},
                    {"sensor_offset_left", d(t.world.sensor_offset_left)},
                    {"sensor_offset_right", d(t.world.sensor_offset_right)}}),
      sec("network", {{"neurons", u(t.network.neurons)},
                      {"omega_max", d(t.network.omega_max)},
                      {"omega_input", d(t.network.omega_input)}}),
      sec("interference", {{"kind", std::string(to_string(t.interference.kind))},
                           {"lambda", d(t.interference.lambda)},
                           {"k", d(t.interference.k)},
                           {"p", d(t.interference.p)},
                           {"b", d(t.interference.b)},
                           {"r_freq", d(t.interference.r_freq)},
                           {"phase_left", d(t.interference.initial_phase_left)},
                           {"phase_right", d(t.interference.initial_phase_right)}}),
      sec("trial", {{"duration", d(t.duration)},
                    {"start_x", d(t.initial_state.x)},
                    {"start_y", d(t.initial_state.y)},
                    {"start_alpha", d(t.initial_state.alpha)}}),
      sec("evolution", {{"population", u(cfg.population_size)},
                        {"generations", u(cfg.generations)},
                        {"mutation_sigma", d(cfg.mutation_sigma)},
                        {"mutation_rate", d(cfg.mutation_rate)},
                        {"lights_per_generation", u(cfg.lights_per_generation)},
                        {"light_radius", d(cfg.light_radius)},
                        {"seed", u(cfg.seed)},
                        {"centre_crossing", cfg.centre_crossing ? "true" : "false"}}),
  };
}

inline std::string to_ini(const EvolutionConfig& cfg) {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : to_document(cfg)) {
    if (!first) os << '\n';
    first = false;
    os << '[' << s.name << "]\n";
    for (const auto& e : s.entries) os << e.key << " = " << e.value << '\n';
  }
  return os.str();
}

}  // namespace ptx
