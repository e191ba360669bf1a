#pragma once

// Closed-loop rollout of a controller in the light-seeking task, with
// fitness, perturbation hooks and per-step logging.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptx/ctrnn.hpp"
#include "ptx/error.hpp"
#include "ptx/genome.hpp"
#include "ptx/interference.hpp"
#include "ptx/table.hpp"
#include "ptx/world.hpp"

namespace ptx {

// Piecewise-linear stimulus replacing a sensor's environmental reading:
// `baseline` until `onset`, a linear ramp to `peak` over `rise`, a linear
// decay to `plateau` over `fall`, then `plateau` until `end`, after which
// the signal returns to `baseline`.
struct StimulusScript {
  double baseline = 0.0;
  double onset = 0.0;
  double rise = 0.0;
  double peak = 0.0;
  double fall = 0.0;
  double plateau = 0.0;
  double end = std::numeric_limits<double>::infinity();

  double value(double t) const {
    if (t < onset || t >= end) return baseline;
    double u = t - onset;
    if (u < rise) return baseline + (peak - baseline) * (u / rise);
    u -= rise;
    if (u < fall) return peak + (plateau - peak) * (u / fall);
    return plateau;
  }

  void validate(double duration) const {
    for (double v : {baseline, onset, rise, peak, fall, plateau})
      if (!std::isfinite(v)) throw ConfigError("stimulus script values must be finite");
    if (rise < 0.0 || fall < 0.0) throw ConfigError("stimulus rise/fall widths must be >= 0");
    if (onset < 0.0 || onset > duration)
      throw ConfigError("stimulus onset " + format_double(onset) + " outside trial duration [0, " +
                        format_double(duration) + "]");
    if (std::isfinite(end) && (end < onset || end > duration))
      throw ConfigError("stimulus end " + format_double(end) + " outside [onset, duration]");
    if (std::isnan(end)) throw ConfigError("stimulus end is NaN");
  }
};

struct PerturbationSpec {
  double interference_gain_left = 1.0;
  double interference_gain_right = 1.0;
  bool sensor_enabled_left = true;
  bool sensor_enabled_right = true;
  std::optional<StimulusScript> script_left;
  std::optional<StimulusScript> script_right;

  void validate(double duration) const {
    if (!(interference_gain_left >= 0.0) || !(interference_gain_right >= 0.0))
      throw ConfigError("interference gains must be >= 0");
    if (script_left) script_left->validate(duration);
    if (script_right) script_right->validate(duration);
  }
};

struct TrialConfig {
  double duration = 10.0;
  std::optional<LightPosition> light = LightPosition{0.0, 3.0};
  RobotState initial_state{0.0, 0.0, std::numbers::pi / 2.0};
  WorldConfig world;
  NetworkConfig network;
  InterferenceSpec interference;
  PerturbationSpec perturbation;
  bool log = false;

  double dt() const { return world.dt; }

  // Index of the final step; the trial visits steps 0..steps().
  std::size_t steps() const {
    const double ratio = duration / world.dt;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio))
      throw ConfigError("trial duration " + format_double(duration) + " is not a multiple of dt " +
                        format_double(world.dt));
    return static_cast<std::size_t>(rounded);
  }

  void validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw ConfigError("trial.duration must be > 0");
    world.validate();
    network.validate();
    interference.validate();
    perturbation.validate(duration);
    if (!initial_state.finite()) throw ConfigError("trial initial state must be finite");
    if (light && (!std::isfinite(light->x) || !std::isfinite(light->y)))
      throw ConfigError("light position must be finite");
    if (steps() < 1) throw ConfigError("trial must span at least one step");
  }
};

struct FitnessRecord {
  double value = 0.0;
  LightPosition light;
  std::uint64_t genome_id = 0;
};

inline std::vector<std::string> trial_log_columns(std::size_t neurons) {
  std::vector<std::string> cols = {"t",          "x",        "y",         "alpha",        "s_left",
                                   "s_right",    "psi_left", "psi_right", "sprime_left",  "sprime_right",
                                   "m_left",     "m_right"};
  for (std::size_t i = 1; i <= neurons; ++i) cols.push_back("y" + std::to_string(i));
  return cols;
}

struct TrialResult {
  std::optional<FitnessRecord> fitness;  // absent when no light is present
  std::optional<TimeSeries> log;
  RobotState final_state;
  std::optional<double> final_distance;
};

// Time-weighted mean of per-step squared distances, weighted by step index.
inline double fitness_from_trajectory(std::span<const double> squared_distances) {
  if (squared_distances.size() < 2)
    throw ConfigError("fitness needs at least two samples (the first has zero weight)");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < squared_distances.size(); ++k) {
    num += squared_distances[k] * static_cast<double>(k);
    den += static_cast<double>(k);
  }
  return num / den;
}

// Clock-face layout: entry p-1 holds position p; position `count` sits at
// (0, radius) and positions advance clockwise.
inline std::vector<LightPosition> probe_lights_clock(double radius = 3.0, std::size_t count = 12) {
  if (count < 1) throw ConfigError("probe light count must be >= 1");
  std::vector<LightPosition> lights;
  lights.reserve(count);
  for (std::size_t p = 1; p <= count; ++p) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(count);
    lights.push_back({radius * std::sin(theta), radius * std::cos(theta)});
  }
  return lights;
}

inline TrialResult run_trial(const NetworkParams& net, const TrialConfig& cfg, std::uint64_t genome_id = 0) {
  cfg.validate();
  net.validate();
  const std::size_t n = net.n;
  if (n != cfg.network.neurons) throw ConfigError("network size does not match trial configuration");

  const std::size_t last = cfg.steps();
  const double dt = cfg.dt();
  const auto& pert = cfg.perturbation;
  const auto& spec = cfg.interference;
  const double lambda = spec.lambda;
  const std::size_t in_left = net.input_ids.at(0);
  const std::size_t in_right = net.input_ids.at(1);
  const std::size_t out_left = net.output_ids[0];
  const std::size_t out_right = net.output_ids[1];

  std::vector<double> y(n, 0.0);
  std::vector<double> firing(n, 0.0);
  std::vector<double> inputs(n, 0.0);
  RobotState pose = cfg.initial_state;
  InterferenceState phase{spec.initial_phase_left, spec.initial_phase_right};
  double m_left = output_scale(y[out_left], net.omega_max);
  double m_right = output_scale(y[out_right], net.omega_max);

  TrialResult result;
  std::optional<TimeSeries> log;
  std::vector<double> row;
  if (cfg.log) {
    log.emplace(trial_log_columns(n));
    log->reserve(last + 1);
    if (cfg.light) {
      log->meta().emplace_back("light_x", format_double(cfg.light->x));
      log->meta().emplace_back("light_y", format_double(cfg.light->y));
    }
    log->meta().emplace_back("dt", format_double(dt));
    log->meta().emplace_back("interference", std::string(to_string(spec.kind)));
    log->meta().emplace_back("lambda", format_double(lambda));
    row.resize(12 + n);
  }

  auto sense = [&](Side side, double t) -> double {
    const bool enabled = side == Side::Left ? pert.sensor_enabled_left : pert.sensor_enabled_right;
    if (!enabled) return 0.0;
    const auto& script = side == Side::Left ? pert.script_left : pert.script_right;
    if (script) return script->value(t);
    if (!cfg.light) return 0.0;
    return env_sensor_activation(pose, cfg.world.sensor_offset(side), *cfg.light, cfg.world);
  };

  double weighted = 0.0;
  double weights = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double s_left = sense(Side::Left, t);
    const double s_right = sense(Side::Right, t);
    const double psi_left = pert.interference_gain_left * interference_value(spec, m_left, phase.c_left);
    const double psi_right = pert.interference_gain_right * interference_value(spec, m_right, phase.c_right);
    const double sp_left = mix_input(s_left, psi_left, lambda);
    const double sp_right = mix_input(s_right, psi_right, lambda);

    if (cfg.light) {
      weighted += squared_distance(pose, *cfg.light) * static_cast<double>(k);
      weights += static_cast<double>(k);
    }
    if (log) {
      row[0] = t;
      row[1] = pose.x;
      row[2] = pose.y;
      row[3] = pose.alpha;
      row[4] = s_left;
      row[5] = s_right;
      row[6] = psi_left;
      row[7] = psi_right;
      row[8] = sp_left;
      row[9] = sp_right;
      row[10] = m_left;
      row[11] = m_right;
      for (std::size_t i = 0; i < n; ++i) row[12 + i] = y[i];
      log->append(row);
    }
    if (k == last) break;

    inputs[in_left] = net.omega_input * sp_left;
    inputs[in_right] = net.omega_input * sp_right;
    advance_network(y, net, inputs, dt, firing);
    double total = 0.0;
    for (double v : y) total += v;
    if (!std::isfinite(total))
      throw NumericError("non-finite neuron activation at t=" + format_double(t + dt) +
                         " (genome " + std::to_string(genome_id) + ")");

    if (spec.kind == InterferenceKind::Sinusoidal)
      phase = step_sinusoid(phase, m_left, m_right, spec.b, spec.r_freq, dt).next;
    m_left = output_scale(y[out_left], net.omega_max);
    m_right = output_scale(y[out_right], net.omega_max);
    pose = step_kinematics(pose, m_left, m_right, cfg.world);
    if (!pose.finite())
      throw NumericError("non-finite robot pose at t=" + format_double(t + dt) + " (genome " +
                         std::to_string(genome_id) + ")");
  }

  result.final_state = pose;
  if (cfg.light) {
    result.fitness = FitnessRecord{weighted / weights, *cfg.light, genome_id};
    result.final_distance = std::sqrt(squared_distance(pose, *cfg.light));
  }
  result.log = std::move(log);
  return result;
}

inline TrialResult run_trial(const NetworkGenome& genome, const TrialConfig& cfg) {
  return run_trial(decode(genome, cfg.network), cfg, genome.id);
}

}  // namespace ptx
