#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdhom/projection.hpp"

namespace fdhom {

// F_n(r) = (1/n) #{j : s_j <= r}. Ties count via <=, exactly as the indicator
// is written; no jittering.
inline double empirical_cdf(std::span<const double> scores, double r) {
  if (scores.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
  std::size_t count = 0;
  for (double s : scores) {
    if (s <= r) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(scores.size());
}

namespace detail {

// Pooled projection scores of one direction, sorted with tie groups. The
// pooled empirical measure puts mass 1/(2n) on every atom, so each of the
// three statistics is one pass over this stream with an integer prefix sum:
//
//   D      = (1/(2n^2)) sum_p |group(p)| * S(p)^2,   S advanced by jump(p)
//   D_perm = same with jump(p) negated on swapped rows
//   D_boot = sum weighted by resample multiplicities (see bootstrap()).
//
// S(p) is integral, so tie handling and the rank invariance of D are exact.
class PooledAtoms {
 public:
  explicit PooledAtoms(const ScoreMatrix& scores) : n_(scores.n) {
    if (n_ < 1) throw std::invalid_argument("PooledAtoms: empty score matrix");
    const std::size_t total = static_cast<std::size_t>(n_) * 2;
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (double v : scores.data) {
      if (!std::isfinite(v)) throw std::invalid_argument("PooledAtoms: non-finite score");
    }
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores.data[a] < scores.data[b]; });
    row_.resize(total);
    jump_.resize(total);
    group_end_.reserve(total);
    for (std::size_t p = 0; p < total; ++p) {
      const std::size_t flat = order[p];
      row_[p] = static_cast<int>(flat / 2);
      jump_[p] = (flat % 2 == 0) ? +1 : -1;  // component 0 raises F1, component 1 raises F2
      if (p + 1 == total || scores.data[order[p + 1]] != scores.data[flat]) {
        group_end_.push_back(static_cast<int>(p + 1));
      }
    }
  }

  int pair_count() const { return n_; }

  // D_n with optional within-pair swaps: swapped[j] != 0 flips row j. An empty
  // mask means no swaps (the observed statistic).
  double permuted(std::span<const std::uint8_t> swapped) const {
    std::int64_t acc = 0;
    std::int64_t prefix = 0;
    std::size_t pos = 0;
    for (int end : group_end_) {
      const std::size_t start = pos;
      for (; pos < static_cast<std::size_t>(end); ++pos) {
        const int j = row_[pos];
        prefix += (swapped.empty() || swapped[static_cast<std::size_t>(j)] == 0) ? jump_[pos]
                                                                                 : -jump_[pos];
      }
      acc += static_cast<std::int64_t>(pos - start) * prefix * prefix;
    }
    return static_cast<double>(acc) / (2.0 * static_cast<double>(n_) * static_cast<double>(n_));
  }

  double observed() const { return permuted({}); }

  // Bootstrap counterpart for a resample with multiplicities counts[j]
  // (sum = n): integrand weights are counts[j]-1, the evaluation measure
  // weights every atom by its multiplicity.
  double bootstrap(std::span<const int> counts) const {
    std::int64_t acc = 0;
    std::int64_t prefix = 0;
    std::size_t pos = 0;
    for (int end : group_end_) {
      std::int64_t group_mass = 0;
      for (; pos < static_cast<std::size_t>(end); ++pos) {
        const int j = row_[pos];
        prefix += static_cast<std::int64_t>(counts[static_cast<std::size_t>(j)] - 1) * jump_[pos];
        group_mass += counts[static_cast<std::size_t>(j)];
      }
      acc += group_mass * prefix * prefix;
    }
    return static_cast<double>(acc) / (2.0 * static_cast<double>(n_) * static_cast<double>(n_));
  }

 private:
  int n_;
  std::vector<int> row_;
  std::vector<int> jump_;
  std::vector<int> group_end_;
};

}  // namespace detail

// Two-sample Cramer-von Mises distance of one score matrix:
//   D_n = n * int [F_{n,1}(r) - F_{n,2}(r)]^2 dFbar_n(r)
// with Fbar_n the pooled empirical measure; evaluates the discrete measure
// exactly. Always in [0, n].
inline double cvm_distance(const ScoreMatrix& scores) {
  return detail::PooledAtoms(scores).observed();
}

// Per-test-run precomputation: score matrices and pooled atoms for every
// direction. Shared by the observed statistic and all resampling replicates.
class CvmEvaluator {
 public:
  CvmEvaluator(const PairedSample& sample, const std::vector<ProjectionDirection>& directions,
               const CoefficientCache& cache)
      : n_(sample.size()) {
    if (directions.empty()) throw std::invalid_argument("CvmEvaluator: no projection directions");
    atoms_.reserve(directions.size());
    for (const ProjectionDirection& direction : directions) {
      atoms_.emplace_back(project_sample(sample, direction, cache));
    }
  }

  int pair_count() const { return n_; }
  std::size_t direction_count() const { return atoms_.size(); }

  // CvM_n: mean of the per-direction distances, summed in direction order.
  double observed() const {
    double sum = 0.0;
    for (const auto& atoms : atoms_) sum += atoms.observed();
    return sum / static_cast<double>(atoms_.size());
  }

  double permutation(std::span<const std::uint8_t> swapped) const {
    if (swapped.size() != static_cast<std::size_t>(n_)) {
      throw std::invalid_argument("CvmEvaluator: swap mask length must equal n");
    }
    double sum = 0.0;
    for (const auto& atoms : atoms_) sum += atoms.permuted(swapped);
    return sum / static_cast<double>(atoms_.size());
  }

  double bootstrap(std::span<const int> counts) const {
    if (counts.size() != static_cast<std::size_t>(n_)) {
      throw std::invalid_argument("CvmEvaluator: count vector length must equal n");
    }
    double sum = 0.0;
    for (const auto& atoms : atoms_) sum += atoms.bootstrap(counts);
    return sum / static_cast<double>(atoms_.size());
  }

 private:
  int n_;
  std::vector<detail::PooledAtoms> atoms_;
};

// CvM_n = mean over directions of cvm_distance(projected scores).
inline double cvm_statistic(const PairedSample& sample,
                            const std::vector<ProjectionDirection>& directions,
                            const CoefficientCache& cache) {
  return CvmEvaluator(sample, directions, cache).observed();
}

}  // namespace fdhom
