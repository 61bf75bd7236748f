#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdhom/hilbert.hpp"
#include "fdhom/numeric_io.hpp"

namespace fdhom {

namespace detail {

// Strict YYYY-MM-DD with basic range checks; zero-padded ISO dates compare
// correctly as strings, which is all the pipeline needs.
inline bool is_iso_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  for (std::size_t k : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) return false;
  }
  const int month = (text[5] - '0') * 10 + (text[6] - '0');
  const int day = (text[8] - '0') * 10 + (text[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

}  // namespace detail

// A dated series of positive levels (prices, index values) in strictly
// increasing calendar order.
struct TimeSeries {
  std::vector<std::string> dates;
  std::vector<double> values;

  TimeSeries(std::vector<std::string> d, std::vector<double> v)
      : dates(std::move(d)), values(std::move(v)) {
    if (dates.size() != values.size()) {
      throw std::invalid_argument("TimeSeries: dates and values differ in length");
    }
    if (dates.empty()) throw std::invalid_argument("TimeSeries: empty series");
    for (std::size_t k = 0; k < dates.size(); ++k) {
      if (!detail::is_iso_date(dates[k])) {
        throw std::invalid_argument("TimeSeries: '" + dates[k] + "' is not an ISO date (YYYY-MM-DD)");
      }
      if (!(std::isfinite(values[k]) && values[k] > 0.0)) {
        throw std::invalid_argument("TimeSeries: value at " + dates[k] + " must be positive and finite");
      }
      if (k > 0 && !(dates[k - 1] < dates[k])) {
        throw std::invalid_argument("TimeSeries: dates must be strictly increasing at " + dates[k]);
      }
    }
  }

  std::size_t size() const { return dates.size(); }
};

enum class ReturnMode { increments, log_returns };

struct SegmentationConfig {
  int segments = 20;
  int points_per_segment = 12;
  ReturnMode mode = ReturnMode::log_returns;

  void validate() const {
    if (segments < 1) throw std::invalid_argument("SegmentationConfig: segments must be >= 1");
    if (points_per_segment < 1) {
      throw std::invalid_argument("SegmentationConfig: points_per_segment must be >= 1");
    }
  }
};

// n curves on a shared uniform grid of points_per_segment + 1 points, each
// anchored to start at exactly zero, plus the calendar dates the windows
// were cut from (dates[j * m .. (j+1) * m] drive curve j).
struct CurveSet {
  Grid grid;
  std::vector<FunctionSample> curves;
  std::vector<std::string> dates;  // the segments * m + 1 observation dates used
};

// Cuts the series into `segments` consecutive windows of m = points_per_segment
// steps; window j spans observations j*m .. (j+1)*m inclusive, so adjacent
// windows share their boundary point. Level paths (optionally log-transformed)
// are re-based to zero at each window start and read as piecewise linear
// functions on [0,1].
inline CurveSet to_curves(const TimeSeries& series, const SegmentationConfig& config) {
  config.validate();
  const std::size_t m = static_cast<std::size_t>(config.points_per_segment);
  const std::size_t needed = static_cast<std::size_t>(config.segments) * m + 1;
  if (series.size() < needed) {
    throw std::invalid_argument("to_curves: need " + std::to_string(needed) +
                                " observations for " + std::to_string(config.segments) +
                                " segments of " + std::to_string(config.points_per_segment) +
                                " steps, got " + std::to_string(series.size()));
  }

  std::vector<double> levels(series.values.begin(), series.values.begin() + needed);
  if (config.mode == ReturnMode::log_returns) {
    for (double& level : levels) level = std::log(level);
  }

  const Grid grid(config.points_per_segment + 1);
  std::vector<FunctionSample> curves;
  curves.reserve(static_cast<std::size_t>(config.segments));
  for (int j = 0; j < config.segments; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * m;
    std::vector<double> path(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      path[k] = levels[base + k] - levels[base];
    }
    path[0] = 0.0;
    curves.emplace_back(grid, std::move(path));
  }

  return CurveSet{grid, std::move(curves),
                  std::vector<std::string>(series.dates.begin(), series.dates.begin() + needed)};
}

// Zips two curve sets into a paired sample. The sets must agree in curve
// count, grid, and observation dates: windows cut from different calendar
// ranges are not paired observations.
inline PairedSample pair_curves(const CurveSet& first, const CurveSet& second) {
  if (first.curves.size() != second.curves.size()) {
    throw std::invalid_argument("pair_curves: curve counts differ");
  }
  if (!(first.grid == second.grid)) {
    throw std::invalid_argument("pair_curves: grids differ");
  }
  if (first.dates != second.dates) {
    throw std::invalid_argument("pair_curves: observation dates differ, series are not aligned");
  }
  std::vector<std::pair<FunctionSample, FunctionSample>> pairs;
  pairs.reserve(first.curves.size());
  for (std::size_t j = 0; j < first.curves.size(); ++j) {
    pairs.emplace_back(first.curves[j], second.curves[j]);
  }
  return PairedSample(std::move(pairs));
}

// CSV with header "date,value". Errors carry 1-based line numbers.
inline TimeSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("series CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "date,value") {
    throw std::invalid_argument("series CSV line 1: expected header 'date,value', got '" + line + "'");
  }

  std::vector<std::string> dates;
  std::vector<double> values;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "series CSV line " + std::to_string(line_number);
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw std::invalid_argument(where + ": expected exactly two fields 'date,value'");
    }
    dates.push_back(line.substr(0, comma));
    values.push_back(detail::parse_double(line.substr(comma + 1), where + ", field value"));
  }
  try {
    return TimeSeries(std::move(dates), std::move(values));
  } catch (const std::exception& error) {
    throw std::invalid_argument(std::string("series CSV: ") + error.what());
  }
}

// Curve dump, one row per grid point per curve: "segment,t,value" with
// 1-based segment ids.
inline void write_curves_csv(std::ostream& out, const CurveSet& set) {
  out << "segment,t,value\n";
  for (std::size_t j = 0; j < set.curves.size(); ++j) {
    const FunctionSample& curve = set.curves[j];
    for (int k = 0; k < set.grid.point_count; ++k) {
      out << (j + 1) << ',' << detail::format_double(set.grid.point(k)) << ','
          << detail::format_double(curve.values[static_cast<std::size_t>(k)]) << '\n';
    }
  }
}

}  // namespace fdhom
