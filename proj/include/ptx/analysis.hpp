#pragma once

// Offline analyses over trial logs: motor statistics for box/raincloud
// plots, orbit classification and peak finding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptx/error.hpp"
#include "ptx/table.hpp"

namespace ptx {

// Quantile by linear interpolation between closest ranks: position
// h = (n - 1) q into the sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ConfigError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct MotorStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;   // smallest sample >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest sample <= q3 + 1.5 IQR
  std::size_t count = 0;
};

inline MotorStats motor_stats(std::vector<double> samples) {
  if (samples.empty()) throw ConfigError("no samples in the requested window");
  std::sort(samples.begin(), samples.end());
  MotorStats s;
  s.count = samples.size();
  s.min = samples.front();
  s.max = samples.back();
  s.q1 = quantile_sorted(samples, 0.25);
  s.median = quantile_sorted(samples, 0.5);
  s.q3 = quantile_sorted(samples, 0.75);
  double total = 0.0;
  for (double v : samples) total += v;
  s.mean = total / static_cast<double>(samples.size());
  const double iqr = s.q3 - s.q1;
  const double low_fence = s.q1 - 1.5 * iqr;
  const double high_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = *std::lower_bound(samples.begin(), samples.end(), low_fence);
  s.whisker_high = *(std::upper_bound(samples.begin(), samples.end(), high_fence) - 1);
  return s;
}

struct TimeWindow {
  double start = 0.0;
  double end = 0.0;
};

// Row indices with start <= t <= end (small tolerance for accumulated t).
inline std::vector<std::size_t> window_rows(const TimeSeries& log, TimeWindow w) {
  if (!(w.end >= w.start)) throw ConfigError("window end precedes its start");
  const auto t = log.column("t");
  if (t.empty()) throw ConfigError("log has no rows");
  const double tol = 1e-9;
  if (w.start < t.front() - tol || w.end > t.back() + tol)
    throw ConfigError("window [" + format_double(w.start) + ", " + format_double(w.end) + "] outside log range [" +
                      format_double(t.front()) + ", " + format_double(t.back()) + "]");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= w.start - tol && t[i] <= w.end + tol) rows.push_back(i);
  if (rows.empty()) throw ConfigError("window contains no samples");
  return rows;
}

inline std::vector<double> column_in_window(const TimeSeries& log, std::string_view name, TimeWindow w) {
  const auto col = log.column(name);
  std::vector<double> out;
  for (auto r : window_rows(log, w)) out.push_back(col[r]);
  return out;
}

struct PooledMotorStats {
  MotorStats left;
  MotorStats right;
  std::vector<double> left_samples;
  std::vector<double> right_samples;
};

inline PooledMotorStats pooled_motor_stats(std::span<const TimeSeries> logs, TimeWindow w) {
  PooledMotorStats out;
  for (const auto& log : logs) {
    if (!log.has("m_left") || !log.has("m_right")) throw ConfigError("log is missing motor columns");
    auto l = column_in_window(log, "m_left", w);
    auto r = column_in_window(log, "m_right", w);
    out.left_samples.insert(out.left_samples.end(), l.begin(), l.end());
    out.right_samples.insert(out.right_samples.end(), r.begin(), r.end());
  }
  out.left = motor_stats(out.left_samples);
  out.right = motor_stats(out.right_samples);
  return out;
}

enum class OrbitType { Type1, Type2, Unclassified };

inline std::string_view to_string(OrbitType t) {
  switch (t) {
    case OrbitType::Type1: return "type1";
    case OrbitType::Type2: return "type2";
    case OrbitType::Unclassified: return "unclassified";
  }
  return "unclassified";
}

struct OrbitThresholds {
  double forward_fraction = 0.95;
  std::size_t sign_changes = 4;
  double distance_ratio = 2.0;
  double min_window = 5.0;
};

struct OrbitLabel {
  OrbitType type = OrbitType::Unclassified;
  double forward_fraction = 0.0;
  std::size_t sign_changes = 0;
  double median_distance = 0.0;
  double max_distance = 0.0;
};

// Counts sign flips of a series, skipping exact zeros.
inline std::size_t count_sign_changes(std::span<const double> v) {
  std::size_t changes = 0;
  int last = 0;
  for (double x : v) {
    const int s = (x > 0.0) - (x < 0.0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Type 2: nearly always driving forwards. Type 1: repeated forward/backward
// reversals while distance to the light stays within distance_ratio times
// its window median.
inline OrbitLabel classify_orbit(const TimeSeries& log, TimeWindow w, std::optional<std::pair<double, double>> light,
                                 const OrbitThresholds& th = {}) {
  if (!log.has("m_left") || !log.has("m_right")) throw ConfigError("log is missing motor columns");
  if (w.end - w.start < th.min_window)
    throw ConfigError("orbit window must span at least " + format_double(th.min_window) + " time units");
  const auto rows = window_rows(log, w);
  const auto ml = log.column("m_left");
  const auto mr = log.column("m_right");
  std::vector<double> net;
  net.reserve(rows.size());
  for (auto r : rows) net.push_back(ml[r] + mr[r]);

  OrbitLabel out;
  const auto forward = std::count_if(net.begin(), net.end(), [](double v) { return v > 0.0; });
  out.forward_fraction = static_cast<double>(forward) / static_cast<double>(net.size());
  out.sign_changes = count_sign_changes(net);

  if (!light) {
    auto lx = log.meta_value("light_x");
    auto ly = log.meta_value("light_y");
    if (lx && ly) {
      auto x = parse_double(*lx);
      auto y = parse_double(*ly);
      if (x && y) light = std::pair{*x, *y};
    }
  }
  bool bounded = false;
  if (light && log.has("x") && log.has("y")) {
    const auto xs = log.column("x");
    const auto ys = log.column("y");
    std::vector<double> dist;
    dist.reserve(rows.size());
    for (auto r : rows) dist.push_back(std::hypot(xs[r] - light->first, ys[r] - light->second));
    out.max_distance = *std::max_element(dist.begin(), dist.end());
    std::vector<double> sorted = dist;
    std::sort(sorted.begin(), sorted.end());
    out.median_distance = quantile_sorted(sorted, 0.5);
    bounded = out.max_distance < th.distance_ratio * out.median_distance;
  }

  if (out.forward_fraction >= th.forward_fraction)
    out.type = OrbitType::Type2;
  else if (out.sign_changes >= th.sign_changes && bounded)
    out.type = OrbitType::Type1;
  return out;
}

// Indices of strict local maxima (plateaus report their first sample).
inline std::vector<std::size_t> find_peaks(std::span<const double> v) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    if (j + 1 < v.size() && v[j + 1] < v[i]) peaks.push_back(i);
    i = j;
  }
  return peaks;
}

// Mean spacing between successive peaks, in the units of `t`.
inline std::optional<double> mean_peak_period(std::span<const double> t, std::span<const double> v) {
  const auto peaks = find_peaks(v);
  if (peaks.size() < 2) return std::nullopt;
  return (t[peaks.back()] - t[peaks.front()]) / static_cast<double>(peaks.size() - 1);
}

}  // namespace ptx
