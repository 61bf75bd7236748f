#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fdhom {

// Uniform partition t_k = k/(point_count-1) of [0,1]. Observation windows of
// any physical length are rescaled onto this interval before entering the
// library; the test statistic only sees pooled ranks of projection scores, so
// the rescaling is harmless.
struct Grid {
  int point_count;

  explicit Grid(int points) : point_count(points) {
    if (point_count < 2) throw std::invalid_argument("Grid: point_count must be >= 2");
  }

  double point(int k) const { return static_cast<double>(k) / (point_count - 1); }
  double spacing() const { return 1.0 / (point_count - 1); }

  friend bool operator==(const Grid& a, const Grid& b) = default;
};

// One discretized element of L^2[0,1]: values sampled on a uniform grid.
struct FunctionSample {
  Grid grid;
  std::vector<double> values;

  FunctionSample(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != static_cast<std::size_t>(grid.point_count)) {
      throw std::invalid_argument("FunctionSample: values length does not match grid");
    }
    for (double x : values) {
      if (!std::isfinite(x)) throw std::invalid_argument("FunctionSample: non-finite value");
    }
  }
};

// n pairs of curves on one shared grid.
struct PairedSample {
  std::vector<std::pair<FunctionSample, FunctionSample>> pairs;

  explicit PairedSample(std::vector<std::pair<FunctionSample, FunctionSample>> p)
      : pairs(std::move(p)) {
    if (pairs.size() < 2) throw std::invalid_argument("PairedSample: need n >= 2 pairs");
    const Grid& g = pairs.front().first.grid;
    for (const auto& [left, right] : pairs) {
      if (!(left.grid == g) || !(right.grid == g)) {
        throw std::invalid_argument("PairedSample: all curves must share one grid");
      }
    }
  }

  int size() const { return static_cast<int>(pairs.size()); }
  const Grid& grid() const { return pairs.front().first.grid; }

  // component: 0 = first element of the pair, 1 = second.
  const FunctionSample& curve(int pair, int component) const {
    return component == 0 ? pairs[static_cast<std::size_t>(pair)].first
                          : pairs[static_cast<std::size_t>(pair)].second;
  }
};

// Normalized Legendre basis element on [0,1]:
//   e_i(t) = sqrt(2(i-1)+1) * P_{i-1}(2t-1),   i = 1, 2, ...
// with P_d the classical Legendre polynomial (Bonnet recurrence).
inline double legendre_eval(int index, double t) {
  if (index < 1) throw std::domain_error("legendre_eval: index must be >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("legendre_eval: t must lie in [0,1]");
  const int degree = index - 1;
  const double u = 2.0 * t - 1.0;
  double prev = 1.0;  // P_0
  if (degree == 0) return 1.0;
  double cur = u;  // P_1
  for (int d = 1; d < degree; ++d) {
    const double next = ((2.0 * d + 1.0) * u * cur - d * prev) / (d + 1.0);
    prev = cur;
    cur = next;
  }
  return std::sqrt(2.0 * degree + 1.0) * cur;
}

inline FunctionSample sampled_basis(int index, const Grid& grid) {
  std::vector<double> values(static_cast<std::size_t>(grid.point_count));
  for (int k = 0; k < grid.point_count; ++k) {
    values[static_cast<std::size_t>(k)] = legendre_eval(index, grid.point(k));
  }
  return FunctionSample(grid, std::move(values));
}

// Composite trapezoid approximation of \int_0^1 f g dt on the shared grid.
inline double inner_product(const FunctionSample& f, const FunctionSample& g) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  const int count = f.grid.point_count;
  double sum = 0.5 * (f.values.front() * g.values.front() + f.values.back() * g.values.back());
  for (int k = 1; k + 1 < count; ++k) {
    sum += f.values[static_cast<std::size_t>(k)] * g.values[static_cast<std::size_t>(k)];
  }
  return sum * f.grid.spacing();
}

// Coefficients c[i-1] = <e_i, f> for i = 1..max_index. Runs the Bonnet
// recurrence per grid point so the cost is O(point_count * max_index).
inline std::vector<double> basis_coefficients(const FunctionSample& f, int max_index) {
  if (max_index < 1) throw std::invalid_argument("basis_coefficients: max_index must be >= 1");
  const int count = f.grid.point_count;
  const double dt = f.grid.spacing();
  std::vector<double> norm(static_cast<std::size_t>(max_index));
  for (int i = 0; i < max_index; ++i) norm[static_cast<std::size_t>(i)] = std::sqrt(2.0 * i + 1.0);
  std::vector<double> coefficients(static_cast<std::size_t>(max_index), 0.0);
  for (int k = 0; k < count; ++k) {
    const double weight = (k == 0 || k == count - 1) ? 0.5 * dt : dt;
    const double fw = f.values[static_cast<std::size_t>(k)] * weight;
    const double u = 2.0 * f.grid.point(k) - 1.0;
    double prev = 1.0;
    coefficients[0] += fw;  // e_1 == 1
    if (max_index == 1) continue;
    double cur = u;
    coefficients[1] += fw * norm[1] * cur;
    for (int d = 1; d + 1 < max_index; ++d) {
      const double next = ((2.0 * d + 1.0) * u * cur - d * prev) / (d + 1.0);
      prev = cur;
      cur = next;
      coefficients[static_cast<std::size_t>(d + 1)] += fw * norm[static_cast<std::size_t>(d + 1)] * next;
    }
  }
  return coefficients;
}

}  // namespace fdhom
