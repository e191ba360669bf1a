#pragma once

// Kinematics and light-sensor model of a circular two-wheeled robot.

#include <cmath>
#include <numbers>
#include <string>

#include "ptx/error.hpp"

namespace ptx {

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;  // heading in radians, never wrapped

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(alpha); }
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct LightPosition {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const LightPosition&, const LightPosition&) = default;
};

enum class Side { Left = 0, Right = 1 };

struct WorldConfig {
  double radius = 0.25;
  double epsilon = 5.0;
  double dt = 0.01;
  double sensor_offset_left = std::numbers::pi / 3.0;
  double sensor_offset_right = -std::numbers::pi / 3.0;

  double sensor_offset(Side side) const {
    return side == Side::Left ? sensor_offset_left : sensor_offset_right;
  }

  void validate() const {
    if (!(radius > 0.0)) throw ConfigError("world.radius must be > 0");
    if (!(epsilon > 0.0)) throw ConfigError("world.epsilon must be > 0");
    if (!(dt > 0.0)) throw ConfigError("world.dt must be > 0");
    if (!std::isfinite(sensor_offset_left) || !std::isfinite(sensor_offset_right))
      throw ConfigError("world sensor offsets must be finite");
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// One explicit Euler step of the differential-drive equations.
inline RobotState step_kinematics(const RobotState& state, double m_left, double m_right,
                                  const WorldConfig& cfg) {
  if (!state.finite()) throw NumericError("step_kinematics: non-finite robot state");
  if (!std::isfinite(m_left) || !std::isfinite(m_right))
    throw NumericError("step_kinematics: non-finite motor value");
  const double speed = m_left + m_right;
  return RobotState{
      state.x + speed * std::cos(state.alpha) * cfg.dt,
      state.y + speed * std::sin(state.alpha) * cfg.dt,
      state.alpha + (m_right - m_left) * cfg.radius * cfg.dt,
  };
}

inline Point sensor_position(const RobotState& state, double offset, const WorldConfig& cfg) {
  const double a = state.alpha + offset;
  return Point{state.x + std::cos(a) * cfg.radius, state.y + std::sin(a) * cfg.radius};
}

// Light reaching a sensor: (b . c_hat)^+ / (1 + D^2) * epsilon.
// A light sitting exactly on the sensor returns epsilon.
inline double env_sensor_activation(const RobotState& state, double offset, const LightPosition& light,
                                    const WorldConfig& cfg) {
  const double a = state.alpha + offset;
  const double bx = std::cos(a);
  const double by = std::sin(a);
  const double cx = light.x - (state.x + bx * cfg.radius);
  const double cy = light.y - (state.y + by * cfg.radius);
  const double d2 = cx * cx + cy * cy;
  if (d2 == 0.0) return cfg.epsilon;
  const double dot = (bx * cx + by * cy) / std::sqrt(d2);
  if (dot <= 0.0) return 0.0;
  return dot / (1.0 + d2) * cfg.epsilon;
}

inline double squared_distance(const RobotState& state, const LightPosition& light) {
  const double dx = state.x - light.x;
  const double dy = state.y - light.y;
  return dx * dx + dy * dy;
}

}  // namespace ptx
