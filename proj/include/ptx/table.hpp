#pragma once

// Column-oriented numeric time series with a delimited-text encoding:
// optional "# key=value" metadata lines, one header row, one row per step.
// Numbers are written in shortest round-trip form.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ptx/error.hpp"

namespace ptx {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<std::string> columns)
      : columns_(std::move(columns)), data_(columns_.size()) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return data_.empty() ? 0 : data_.front().size(); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      if (columns_[i] == name) return i;
    return std::nullopt;
  }
  bool has(std::string_view name) const { return index_of(name).has_value(); }

  std::span<const double> column(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw ConfigError("time series has no column '" + std::string(name) + "'");
    return data_[*idx];
  }
  std::span<const double> column(std::size_t idx) const { return data_.at(idx); }
  std::vector<double>& mutable_column(std::size_t idx) { return data_.at(idx); }

  void reserve(std::size_t n) {
    for (auto& c : data_) c.reserve(n);
  }

  void append(std::span<const double> row) {
    if (row.size() != columns_.size()) throw ConfigError("row width does not match column count");
    for (std::size_t i = 0; i < row.size(); ++i) data_[i].push_back(row[i]);
  }

  // Ordered metadata carried as comment lines.
  std::vector<std::pair<std::string, std::string>>& meta() { return meta_; }
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }
  std::optional<std::string> meta_value(std::string_view key) const {
    for (const auto& [k, v] : meta_)
      if (k == key) return v;
    return std::nullopt;
  }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : meta_) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    const std::size_t n = rows();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out << ',';
        out << format_double(data_[c][r]);
      }
      out << '\n';
    }
  }

  std::string to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  static TimeSeries read(std::istream& in) {
    TimeSeries ts;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<double> row;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!have_header) {
        if (line.rfind("#", 0) == 0) {
          std::string_view body(line);
          body.remove_prefix(1);
          if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
          auto eq = body.find('=');
          if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": metadata line without '='");
          ts.meta_.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
          continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        ts.columns_ = std::move(cols);
        ts.data_.assign(ts.columns_.size(), {});
        have_header = true;
        continue;
      }
      if (line.empty()) continue;
      row.clear();
      std::size_t start = 0;
      while (true) {
        auto comma = line.find(',', start);
        auto cell = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                     : comma - start);
        auto v = parse_double(cell);
        if (!v)
          throw ConfigError("line " + std::to_string(line_no) + ": malformed number '" + std::string(cell) + "'");
        row.push_back(*v);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (row.size() != ts.columns_.size())
        throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(ts.columns_.size()) +
                          " fields, found " + std::to_string(row.size()));
      ts.append(row);
    }
    if (!have_header) throw ConfigError("time series has no header row");
    return ts;
  }

  static TimeSeries from_string(const std::string& text) {
    std::istringstream is(text);
    return read(is);
  }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> data_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

}  // namespace ptx
