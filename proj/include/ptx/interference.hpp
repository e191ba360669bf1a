#pragma once

// Motor-driven sensory interference functions and their mixing with the
// environmental sensor signal.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "ptx/error.hpp"

namespace ptx {

enum class InterferenceKind { Null, Sigmoidal, Squared, Sinusoidal };

inline std::string_view to_string(InterferenceKind kind) {
  switch (kind) {
    case InterferenceKind::Null: return "null";
    case InterferenceKind::Sigmoidal: return "sigmoidal";
    case InterferenceKind::Squared: return "squared";
    case InterferenceKind::Sinusoidal: return "sinusoidal";
  }
  return "null";
}

inline std::optional<InterferenceKind> parse_interference_kind(std::string_view s) {
  if (s == "null") return InterferenceKind::Null;
  if (s == "sigmoidal") return InterferenceKind::Sigmoidal;
  if (s == "squared") return InterferenceKind::Squared;
  if (s == "sinusoidal") return InterferenceKind::Sinusoidal;
  return std::nullopt;
}

struct InterferenceSpec {
  InterferenceKind kind = InterferenceKind::Null;
  double k = 50.0;      // sigmoid steepness
  double p = 0.5;       // sigmoid midpoint
  double b = 0.1;       // sinusoid base frequency
  double r_freq = 8.0;  // sinusoid frequency range
  double lambda = 0.0;  // share of the input taken by interference
  double initial_phase_left = 0.0;
  double initial_phase_right = 0.0;

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("interference.lambda must lie in [0, 1]");
    if (!(k > 0.0)) throw ConfigError("interference.k must be > 0");
    if (!(r_freq > 0.0)) throw ConfigError("interference.r_freq must be > 0");
    if (!(b >= 0.0)) throw ConfigError("interference.b must be >= 0");
    if (!std::isfinite(p) || !std::isfinite(initial_phase_left) || !std::isfinite(initial_phase_right))
      throw ConfigError("interference parameters must be finite");
  }
};

struct InterferenceState {
  double c_left = 0.0;
  double c_right = 0.0;
  friend bool operator==(const InterferenceState&, const InterferenceState&) = default;
};

inline double eval_sigmoid(double m, double k, double p) {
  return 1.0 / (1.0 + std::exp(-k * (std::abs(m) - p)));
}

inline double eval_squared(double m) { return m * m; }

inline double sinusoid_value(double phase) { return (std::sin(phase) + 1.0) / 2.0; }

struct SinusoidStep {
  InterferenceState next;
  double psi_left = 0.0;
  double psi_right = 0.0;
};

// Interference is read at the current phase; the returned state is the phase
// advanced by one Euler step at the rate set by the given motor outputs.
inline SinusoidStep step_sinusoid(const InterferenceState& state, double m_left, double m_right, double b,
                                  double r_freq, double dt) {
  SinusoidStep out;
  out.psi_left = sinusoid_value(state.c_left);
  out.psi_right = sinusoid_value(state.c_right);
  out.next.c_left = state.c_left + (b + std::abs(m_left)) * r_freq * dt;
  out.next.c_right = state.c_right + (b + std::abs(m_right)) * r_freq * dt;
  return out;
}

inline double mix_input(double s, double psi, double lambda) { return lambda * psi + (1.0 - lambda) * s; }

// Stateless interference value for one side. Sinusoidal interference depends
// on phase, which is passed in.
inline double interference_value(const InterferenceSpec& spec, double m, double phase) {
  switch (spec.kind) {
    case InterferenceKind::Null: return 0.0;
    case InterferenceKind::Sigmoidal: return eval_sigmoid(m, spec.k, spec.p);
    case InterferenceKind::Squared: return eval_squared(m);
    case InterferenceKind::Sinusoidal: return sinusoid_value(phase);
  }
  return 0.0;
}

}  // namespace ptx
