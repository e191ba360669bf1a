#pragma once

// Flat normalized genome and its decoding into controller parameters.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptx/ctrnn.hpp"
#include "ptx/error.hpp"

namespace ptx {

struct NetworkConfig {
  std::size_t neurons = 10;
  double omega_max = 5.0;
  double omega_input = 5.0;

  void validate() const {
    if (neurons < 4) throw ConfigError("network.neurons must be >= 4");
    if (!(omega_max > 0.0)) throw ConfigError("network.omega_max must be > 0");
    if (!std::isfinite(omega_input)) throw ConfigError("network.omega_input must be finite");
  }
};

// Genes lie in [0, 1]. Per neuron i the block at i * (n + 2) holds the time
// constant gene, the bias gene, then one gene per incoming weight (from
// neuron 0 .. n-1).
struct NetworkGenome {
  std::vector<double> genes;
  std::uint64_t id = 0;
  std::optional<std::uint64_t> lineage;
};

inline std::size_t genome_length(std::size_t n) { return n * (n + 2); }
inline std::size_t tau_gene(std::size_t n, std::size_t i) { return i * (n + 2); }
inline std::size_t bias_gene(std::size_t n, std::size_t i) { return i * (n + 2) + 1; }
inline std::size_t weight_gene(std::size_t n, std::size_t from, std::size_t to) { return to * (n + 2) + 2 + from; }

inline double gene_to_tau(double g) { return kTauMin + g * (kTauMax - kTauMin); }
inline double gene_to_bias(double g) { return -kBiasBound + 2.0 * kBiasBound * g; }
inline double gene_to_weight(double g) { return -kWeightBound + 2.0 * kWeightBound * g; }
inline double bias_to_gene(double beta) { return (beta + kBiasBound) / (2.0 * kBiasBound); }

inline NetworkParams decode(const NetworkGenome& genome, const NetworkConfig& cfg) {
  const std::size_t n = cfg.neurons;
  if (genome.genes.size() != genome_length(n))
    throw ConfigError("genome length " + std::to_string(genome.genes.size()) + " does not match " +
                      std::to_string(n) + " neurons (expected " + std::to_string(genome_length(n)) + ")");
  for (double g : genome.genes)
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("genome gene outside [0, 1]");
  NetworkParams p = NetworkParams::with_size(n);
  p.omega_max = cfg.omega_max;
  p.omega_input = cfg.omega_input;
  for (std::size_t i = 0; i < n; ++i) {
    p.tau[i] = gene_to_tau(genome.genes[tau_gene(n, i)]);
    p.beta[i] = gene_to_bias(genome.genes[bias_gene(n, i)]);
    const bool masked = p.is_input(i);
    for (std::size_t j = 0; j < n; ++j)
      p.weights.at(j, i) = masked ? 0.0 : gene_to_weight(genome.genes[weight_gene(n, j, i)]);
  }
  return p;
}

}  // namespace ptx
