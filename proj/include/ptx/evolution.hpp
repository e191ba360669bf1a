#pragma once

// Generational microbial GA: every member plays exactly one pairwise
// tournament per generation and the loser is overwritten by a mutated copy
// of the winner. Scores are mean trial costs over a set of lights arranged
// as a regular polygon (a square by default) at a random angle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ptx/ctrnn.hpp"
#include "ptx/error.hpp"
#include "ptx/genome.hpp"
#include "ptx/parallel.hpp"
#include "ptx/trial.hpp"

namespace ptx {

using Rng = std::mt19937_64;

struct EvolutionConfig {
  std::size_t population_size = 50;
  std::size_t generations = 2000;
  double mutation_sigma = 0.05;
  double mutation_rate = 0.1;
  TrialConfig trial;
  std::size_t lights_per_generation = 4;
  double light_radius = 3.0;
  std::uint64_t seed = 1;
  bool centre_crossing = true;

  void validate() const {
    if (population_size < 2 || population_size % 2 != 0)
      throw ConfigError("evolution.population must be even and >= 2");
    if (!(mutation_sigma > 0.0)) throw ConfigError("evolution.mutation_sigma must be > 0");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
      throw ConfigError("evolution.mutation_rate must lie in [0, 1]");
    if (lights_per_generation < 1) throw ConfigError("evolution.lights_per_generation must be >= 1");
    if (!(light_radius > 0.0)) throw ConfigError("evolution.light_radius must be > 0");
    TrialConfig probe = trial;
    probe.light = LightPosition{light_radius, 0.0};
    probe.validate();
  }
};

struct Population {
  std::vector<NetworkGenome> members;
  std::uint64_t generation = 0;
  std::uint64_t rng_seed = 0;
  std::uint64_t next_id = 0;
};

// Independent deterministic stream for (seed, generation, stream tag, index).
enum class Stream : std::uint32_t { Init = 1, Generation = 2, Mutation = 3 };

inline Rng make_rng(std::uint64_t seed, std::uint64_t generation, Stream stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation), static_cast<std::uint32_t>(generation >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Uniform genes. With centre_crossing, bias genes are set so that each
// decoded bias equals the clamped centre-crossing value for its decoded
// incoming weights (input neurons have none, so their bias is 0).
inline NetworkGenome random_genome(Rng& rng, std::size_t n, bool centre_crossing) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NetworkGenome g;
  g.genes.resize(genome_length(n));
  for (auto& v : g.genes) v = unit(rng);
  if (centre_crossing) {
    NetworkConfig shape;
    shape.neurons = n;
    const NetworkParams p = decode(g, shape);
    const auto beta = centre_crossing_biases(p.weights);
    for (std::size_t i = 0; i < n; ++i) g.genes[bias_gene(n, i)] = bias_to_gene(beta[i]);
  }
  return g;
}

inline double reflect_unit(double g) {
  while (g < 0.0 || g > 1.0) g = g < 0.0 ? -g : 2.0 - g;
  return g;
}

inline NetworkGenome mutate(const NetworkGenome& genome, Rng& rng, double sigma, double rate) {
  if (!(sigma > 0.0)) throw ConfigError("mutation sigma must be > 0");
  std::bernoulli_distribution pick(rate);
  std::normal_distribution<double> noise(0.0, sigma);
  NetworkGenome out = genome;
  for (auto& g : out.genes)
    if (pick(rng)) g = reflect_unit(g + noise(rng));
  return out;
}

inline std::vector<LightPosition> light_polygon(double angle, double radius, std::size_t count = 4) {
  std::vector<LightPosition> lights;
  lights.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = angle + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    lights.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return lights;
}

struct LightSquare {
  double angle = 0.0;
  std::array<LightPosition, 4> lights;
};

inline LightSquare light_square(Rng& rng, double radius) {
  if (!(radius > 0.0)) throw ConfigError("light radius must be > 0");
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  LightSquare sq;
  sq.angle = angle(rng);
  const auto pts = light_polygon(sq.angle, radius, 4);
  std::copy(pts.begin(), pts.end(), sq.lights.begin());
  return sq;
}

inline Population initial_population(const EvolutionConfig& cfg) {
  Population pop;
  pop.rng_seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    auto rng = make_rng(cfg.seed, 0, Stream::Init, i);
    auto g = random_genome(rng, cfg.trial.network.neurons, cfg.centre_crossing);
    g.id = pop.next_id++;
    pop.members.push_back(std::move(g));
  }
  return pop;
}

// Mean cost over the given lights; a numeric blow-up scores +inf.
inline double combined_score(const NetworkGenome& genome, const TrialConfig& tmpl,
                             std::span<const LightPosition> lights) {
  TrialConfig cfg = tmpl;
  cfg.log = false;
  const NetworkParams params = decode(genome, cfg.network);
  double total = 0.0;
  try {
    for (const auto& light : lights) {
      cfg.light = light;
      total += run_trial(params, cfg, genome.id).fitness->value;
    }
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
  return total / static_cast<double>(lights.size());
}

inline std::vector<double> evaluate_population(const std::vector<NetworkGenome>& members, const TrialConfig& tmpl,
                                               std::span<const LightPosition> lights, std::size_t threads) {
  std::vector<double> scores(members.size());
  parallel_for(members.size(), threads,
               [&](std::size_t i) { scores[i] = combined_score(members[i], tmpl, lights); });
  return scores;
}

struct GenerationRecord {
  std::uint64_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double light_angle = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // member indices
  std::vector<double> scores;
};

inline Population run_generation(const Population& pop, const EvolutionConfig& cfg, std::size_t threads = 1,
                                 GenerationRecord* record = nullptr) {
  const std::size_t size = pop.members.size();
  if (size < 2 || size % 2 != 0) throw ConfigError("population size must be even and >= 2");

  auto rng = make_rng(pop.rng_seed, pop.generation, Stream::Generation);
  std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);
  const double angle = angle_dist(rng);
  const auto lights = light_polygon(angle, cfg.light_radius, cfg.lights_per_generation);
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const auto scores = evaluate_population(pop.members, cfg.trial, lights, threads);

  Population next = pop;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(size / 2);
  for (std::size_t p = 0; p + 1 < size; p += 2) {
    const std::size_t a = order[p];
    const std::size_t b = order[p + 1];
    pairs.emplace_back(a, b);
    // Lower cost wins; on a tie the second member of the pair is replaced.
    const bool a_loses = scores[a] > scores[b];
    const std::size_t winner = a_loses ? b : a;
    const std::size_t loser = a_loses ? a : b;
    auto mrng = make_rng(pop.rng_seed, pop.generation, Stream::Mutation, loser);
    NetworkGenome child = mutate(pop.members[winner], mrng, cfg.mutation_sigma, cfg.mutation_rate);
    child.id = next.next_id++;
    child.lineage = pop.members[winner].id;
    next.members[loser] = std::move(child);
  }
  next.generation = pop.generation + 1;

  if (record) {
    record->generation = pop.generation;
    record->best = *std::min_element(scores.begin(), scores.end());
    record->mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(size);
    record->light_angle = angle;
    record->pairs = std::move(pairs);
    record->scores = scores;
  }
  return next;
}

struct HistoryRow {
  std::uint64_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double light_angle = 0.0;
};

struct EvolutionResult {
  Population population;
  std::vector<HistoryRow> history;
};

// Runs cfg.generations generations from `initial` (or a fresh random
// population). `on_generation`, when given, sees every record and may
// return false to stop early.
inline EvolutionResult evolve(const EvolutionConfig& cfg, std::optional<Population> initial = std::nullopt,
                              std::size_t threads = 1,
                              const std::function<bool(const Population&, const GenerationRecord&)>& on_generation = {}) {
  cfg.validate();
  EvolutionResult result;
  result.population = initial ? std::move(*initial) : initial_population(cfg);
  if (result.population.members.size() % 2 != 0)
    throw ConfigError("population size must be even");
  for (const auto& m : result.population.members) (void)decode(m, cfg.trial.network);
  for (std::size_t g = 0; g < cfg.generations; ++g) {
    GenerationRecord rec;
    result.population = run_generation(result.population, cfg, threads, &rec);
    result.history.push_back({rec.generation, rec.best, rec.mean, rec.light_angle});
    if (on_generation && !on_generation(result.population, rec)) break;
  }
  return result;
}

// Mean cost over the clock probe lights, per member.
inline std::vector<double> probe_scores(const std::vector<NetworkGenome>& members, const TrialConfig& tmpl,
                                        std::size_t threads, double radius = 3.0) {
  const auto lights = probe_lights_clock(radius, 12);
  return evaluate_population(members, tmpl, lights, threads);
}

inline std::size_t best_member_index(const std::vector<NetworkGenome>& members, const TrialConfig& tmpl,
                                     std::size_t threads, double radius = 3.0) {
  if (members.empty()) throw ConfigError("population is empty");
  const auto scores = probe_scores(members, tmpl, threads, radius);
  return static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace ptx
