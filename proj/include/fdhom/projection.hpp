#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fdhom/hilbert.hpp"
#include "fdhom/rng.hpp"

namespace fdhom {

// Sparse unit vector x = sum_l weights[l] * e_{indices[l]} in the projection
// space: indices strictly increasing, weights on the unit sphere.
struct ProjectionDirection {
  std::vector<int> indices;
  std::vector<double> weights;
};

struct DirectionSamplerConfig {
  double poisson_rate_nu1 = 1.0;  // law of the term count k (shifted by 1)
  double poisson_rate_nu2 = 1.0;  // law of the basis indices (shifted by 1)
  int max_index = 50;             // truncation of the index law

  void validate() const {
    if (!(poisson_rate_nu1 > 0.0) || !(poisson_rate_nu2 > 0.0)) {
      throw std::invalid_argument("DirectionSamplerConfig: rates must be positive");
    }
    if (max_index < 1) throw std::invalid_argument("DirectionSamplerConfig: max_index must be >= 1");
  }
};

namespace detail {

// Shifted-Poisson(rate) mass on {1, ..., max_index}: p_i proportional to
// Pois(rate){i-1}. The truncation discards < 1e-45 of the mass at defaults.
inline std::vector<double> truncated_shifted_poisson_pmf(double rate, int max_index) {
  std::vector<double> pmf(static_cast<std::size_t>(max_index));
  double mass = std::exp(-rate);
  for (int i = 0; i < max_index; ++i) {
    pmf[static_cast<std::size_t>(i)] = mass;
    mass *= rate / (i + 1);
  }
  return pmf;
}

}  // namespace detail

// One draw from the direction measure:
//   1. k = 1 + Poisson(nu1), redrawn while k > max_index;
//   2. k distinct indices by sequential draws from the truncated shifted-Poisson(nu2)
//      law with chosen atoms removed and the remainder renormalized;
//   3. weights uniform on the unit sphere in R^k (normalized Gaussians);
//   4. indices sorted ascending, weights carried along.
inline ProjectionDirection sample_direction(RngStream& rng, const DirectionSamplerConfig& config) {
  config.validate();

  int term_count = 0;
  do {
    term_count = 1 + rng.poisson(config.poisson_rate_nu1);
  } while (term_count > config.max_index);

  std::vector<double> pmf = detail::truncated_shifted_poisson_pmf(config.poisson_rate_nu2,
                                                                  config.max_index);
  double remaining = 0.0;
  for (double p : pmf) remaining += p;

  std::vector<std::pair<int, double>> picked;  // (index, weight), sorted later
  picked.reserve(static_cast<std::size_t>(term_count));
  for (int draw = 0; draw < term_count; ++draw) {
    const double u = rng.uniform() * remaining;
    double cumulative = 0.0;
    int chosen = -1;
    for (int i = 0; i < config.max_index; ++i) {
      const double p = pmf[static_cast<std::size_t>(i)];
      if (p == 0.0) continue;
      cumulative += p;
      if (u < cumulative) {
        chosen = i;
        break;
      }
    }
    if (chosen < 0) {  // u landed on the cumulative boundary; take the last live atom
      for (int i = config.max_index - 1; i >= 0; --i) {
        if (pmf[static_cast<std::size_t>(i)] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    remaining -= pmf[static_cast<std::size_t>(chosen)];
    pmf[static_cast<std::size_t>(chosen)] = 0.0;
    picked.emplace_back(chosen + 1, 0.0);
  }

  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (auto& [index, weight] : picked) {
      weight = rng.normal();
      norm_sq += weight * weight;
    }
  } while (norm_sq == 0.0);
  const double inv_norm = 1.0 / std::sqrt(norm_sq);

  std::sort(picked.begin(), picked.end());
  ProjectionDirection direction;
  direction.indices.reserve(picked.size());
  direction.weights.reserve(picked.size());
  for (const auto& [index, weight] : picked) {
    direction.indices.push_back(index);
    direction.weights.push_back(weight * inv_norm);
  }
  return direction;
}

inline std::vector<ProjectionDirection> sample_directions(RngStream& rng, int count,
                                                          const DirectionSamplerConfig& config) {
  if (count < 1) throw std::invalid_argument("sample_directions: count must be >= 1");
  std::vector<ProjectionDirection> directions;
  directions.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) directions.push_back(sample_direction(rng, config));
  return directions;
}

// Basis coefficients <e_i, X_{j,c}> for every curve of a paired sample,
// i = 1..max_index. Computed once per test run; projection scoring then costs
// O(direction terms) per curve instead of a quadrature pass.
class CoefficientCache {
 public:
  CoefficientCache(const PairedSample& sample, int max_index)
      : max_index_(max_index), pair_count_(sample.size()) {
    if (max_index < 1) throw std::invalid_argument("CoefficientCache: max_index must be >= 1");
    coefficients_.reserve(static_cast<std::size_t>(pair_count_) * 2);
    for (int j = 0; j < pair_count_; ++j) {
      for (int c = 0; c < 2; ++c) {
        coefficients_.push_back(basis_coefficients(sample.curve(j, c), max_index));
      }
    }
  }

  int max_index() const { return max_index_; }
  int pair_count() const { return pair_count_; }

  double coefficient(int pair, int component, int index) const {
    if (index < 1 || index > max_index_) {
      throw std::out_of_range("CoefficientCache: basis index outside cached range");
    }
    return coefficients_[static_cast<std::size_t>(pair) * 2 + static_cast<std::size_t>(component)]
                        [static_cast<std::size_t>(index - 1)];
  }

 private:
  int max_index_;
  int pair_count_;
  std::vector<std::vector<double>> coefficients_;
};

// n x 2 matrix of projection scores <x, X_{j,c}> for one direction.
struct ScoreMatrix {
  int n = 0;
  std::vector<double> data;  // row-major, data[2*j + c]

  ScoreMatrix() = default;
  explicit ScoreMatrix(int rows) : n(rows), data(static_cast<std::size_t>(rows) * 2, 0.0) {}

  double& at(int j, int c) { return data[static_cast<std::size_t>(j) * 2 + static_cast<std::size_t>(c)]; }
  double at(int j, int c) const {
    return data[static_cast<std::size_t>(j) * 2 + static_cast<std::size_t>(c)];
  }
};

inline ScoreMatrix project_sample(const PairedSample& sample, const ProjectionDirection& direction,
                                  const CoefficientCache& cache) {
  if (cache.pair_count() != sample.size()) {
    throw std::invalid_argument("project_sample: cache built for a different sample");
  }
  ScoreMatrix scores(sample.size());
  for (int j = 0; j < sample.size(); ++j) {
    for (int c = 0; c < 2; ++c) {
      double score = 0.0;
      for (std::size_t l = 0; l < direction.indices.size(); ++l) {
        score += direction.weights[l] * cache.coefficient(j, c, direction.indices[l]);
      }
      scores.at(j, c) = score;
    }
  }
  return scores;
}

}  // namespace fdhom
