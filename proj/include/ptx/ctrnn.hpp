#pragma once

// Continuous-time recurrent neural network controller.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ptx/error.hpp"

namespace ptx {

inline constexpr double kTauMin = 0.05;
inline constexpr double kTauMax = 3.0;
inline constexpr double kBiasBound = 5.0;
inline constexpr double kWeightBound = 5.0;

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Square n x n matrix stored flat; at(from, to) is the weight of the
// connection from neuron `from` onto neuron `to`.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& at(std::size_t from, std::size_t to) { return w_[from * n_ + to]; }
  double at(std::size_t from, std::size_t to) const { return w_[from * n_ + to]; }
  std::span<const double> flat() const { return w_; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
};

struct NetworkParams {
  std::size_t n = 0;
  std::vector<double> tau;
  std::vector<double> beta;
  WeightMatrix weights;
  double omega_max = 5.0;
  double omega_input = 5.0;
  std::vector<std::size_t> input_ids;   // 0-based
  std::vector<std::size_t> output_ids;  // 0-based; [left motor, right motor]

  // Standard layout: neurons 0 and 1 are the left/right sensor inputs, the
  // last two neurons drive the left/right motors.
  static NetworkParams with_size(std::size_t n) {
    if (n < 4) throw ConfigError("network needs at least 4 neurons, got " + std::to_string(n));
    NetworkParams p;
    p.n = n;
    p.tau.assign(n, 1.0);
    p.beta.assign(n, 0.0);
    p.weights = WeightMatrix(n);
    p.input_ids = {0, 1};
    p.output_ids = {n - 2, n - 1};
    return p;
  }

  bool is_input(std::size_t i) const {
    return std::find(input_ids.begin(), input_ids.end(), i) != input_ids.end();
  }

  // Throws ConfigError when a bound or the input-neuron wiring rule is violated.
  void validate() const {
    if (tau.size() != n || beta.size() != n || weights.size() != n)
      throw ConfigError("network parameter arrays do not match neuron count");
    for (std::size_t i = 0; i < n; ++i) {
      if (!(tau[i] >= kTauMin && tau[i] <= kTauMax))
        throw ConfigError("tau[" + std::to_string(i) + "] = " + std::to_string(tau[i]) +
                          " outside [0.05, 3]");
      if (!(std::abs(beta[i]) <= kBiasBound))
        throw ConfigError("beta[" + std::to_string(i) + "] outside [-5, 5]");
      for (std::size_t j = 0; j < n; ++j) {
        if (!(std::abs(weights.at(j, i)) <= kWeightBound))
          throw ConfigError("weight outside [-5, 5]");
        if (is_input(i) && weights.at(j, i) != 0.0)
          throw ConfigError("input neuron " + std::to_string(i) + " has a non-zero incoming weight");
      }
    }
    for (auto id : input_ids)
      if (id >= n) throw ConfigError("input id out of range");
    for (auto id : output_ids)
      if (id >= n) throw ConfigError("output id out of range");
    if (output_ids.size() != 2) throw ConfigError("exactly two output neurons are required");
  }
};

struct NetworkState {
  std::vector<double> y;

  static NetworkState zeros(std::size_t n) { return NetworkState{std::vector<double>(n, 0.0)}; }
  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

// In-place Euler step. `firing` is scratch space of length n. Performs no
// validation; callers check params once up front.
inline void advance_network(std::span<double> y, const NetworkParams& p, std::span<const double> inputs,
                            double dt, std::span<double> firing) {
  const std::size_t n = p.n;
  for (std::size_t j = 0; j < n; ++j) firing[j] = logistic(y[j] + p.beta[j]);
  const auto w = p.weights.flat();
  for (std::size_t i = 0; i < n; ++i) {
    double drive = inputs[i];
    for (std::size_t j = 0; j < n; ++j) drive += w[j * n + i] * firing[j];
    y[i] += dt / p.tau[i] * (drive - y[i]);
  }
}

inline NetworkState step_network(const NetworkState& state, const NetworkParams& params,
                                 std::span<const double> inputs, double dt) {
  if (state.y.size() != params.n || inputs.size() != params.n)
    throw ConfigError("step_network: state/input size does not match neuron count");
  if (!(dt > 0.0)) throw ConfigError("step_network: dt must be > 0");
  for (std::size_t i = 0; i < params.n; ++i) {
    if (!(params.tau[i] >= kTauMin))
      throw ConfigError("step_network: tau below stability floor 0.05");
    if (inputs[i] != 0.0 && !params.is_input(i))
      throw ConfigError("step_network: external input on non-input neuron " + std::to_string(i));
  }
  NetworkState next = state;
  std::vector<double> firing(params.n);
  advance_network(next.y, params, inputs, dt, firing);
  for (double v : next.y)
    if (!std::isfinite(v)) throw NumericError("step_network: non-finite activation");
  return next;
}

// Maps an activation into the open interval (-1, 1).
inline double output_scale(double y, double omega_max) {
  return 2.0 / (1.0 + std::exp(-y / std::sqrt(omega_max))) - 1.0;
}

// Bias placing each neuron's equilibrium at the centre of its logistic range.
inline std::vector<double> centre_crossing_biases(const WeightMatrix& weights) {
  const std::size_t n = weights.size();
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    double incoming = 0.0;
    for (std::size_t j = 0; j < n; ++j) incoming += weights.at(j, i);
    beta[i] = std::clamp(-incoming / 2.0, -kBiasBound, kBiasBound);
  }
  return beta;
}

}  // namespace ptx
