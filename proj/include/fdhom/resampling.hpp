#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fdhom/cvm.hpp"
#include "fdhom/parallel.hpp"
#include "fdhom/rng.hpp"

namespace fdhom {

struct ResamplingConfig {
  int replicates = 999;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int direction_count = 500;
  DirectionSamplerConfig sampler;
  int threads = 1;  // 0 = hardware concurrency

  void validate() const {
    if (replicates < 1) throw std::invalid_argument("ResamplingConfig: replicates must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("ResamplingConfig: alpha must lie in (0,1)");
    }
    if (direction_count < 1) {
      throw std::invalid_argument("ResamplingConfig: direction_count must be >= 1");
    }
    sampler.validate();
  }
};

struct TestResult {
  double observed = 0.0;
  std::vector<double> boot_stats;
  std::vector<double> perm_stats;
  double p_boot = 1.0;
  double p_perm = 1.0;
  bool reject_boot = false;
  bool reject_perm = false;
  ResamplingConfig config;
};

// Multiplicities of an n-out-of-n resample with replacement (sum equals n).
inline std::vector<int> draw_bootstrap_counts(RngStream& rng, int n) {
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (int draw = 0; draw < n; ++draw) {
    ++counts[static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(n)))];
  }
  return counts;
}

// Independent fair sign bits; bit j swaps the components of pair j.
inline std::vector<std::uint8_t> draw_permutation_mask(RngStream& rng, int n) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n));
  for (auto& bit : mask) bit = rng.flip() ? 1 : 0;
  return mask;
}

inline double bootstrap_statistic(const CvmEvaluator& evaluator, RngStream& rng) {
  const std::vector<int> counts = draw_bootstrap_counts(rng, evaluator.pair_count());
  return evaluator.bootstrap(counts);
}

inline double permutation_statistic(const CvmEvaluator& evaluator, RngStream& rng) {
  const std::vector<std::uint8_t> mask = draw_permutation_mask(rng, evaluator.pair_count());
  return evaluator.permutation(mask);
}

// Convenience forms; the evaluator overloads avoid rebuilding the pooled
// atoms when many replicates share one direction list.
inline double bootstrap_statistic(const PairedSample& sample,
                                  const std::vector<ProjectionDirection>& directions,
                                  RngStream& rng, const CoefficientCache& cache) {
  return bootstrap_statistic(CvmEvaluator(sample, directions, cache), rng);
}

inline double permutation_statistic(const PairedSample& sample,
                                    const std::vector<ProjectionDirection>& directions,
                                    RngStream& rng, const CoefficientCache& cache) {
  return permutation_statistic(CvmEvaluator(sample, directions, cache), rng);
}

// (1 + #{replicate >= observed}) / (B + 1); ties count toward the numerator,
// so the p-value is positive and the test is valid.
inline double monte_carlo_p_value(double observed, std::span<const double> replicates) {
  std::size_t exceed = 0;
  for (double value : replicates) {
    if (value >= observed) ++exceed;
  }
  return static_cast<double>(1 + exceed) / static_cast<double>(replicates.size() + 1);
}

// Full test: one direction list shared by the observed statistic and every
// replicate; B bootstrap and B permutation replicates on substreams addressed
// by replicate index, so the result is identical for any thread count.
inline TestResult run_test(const PairedSample& sample, const ResamplingConfig& config) {
  config.validate();
  const RngStream root(config.seed);

  RngStream direction_rng = root.substream(stream_tag::directions);
  const std::vector<ProjectionDirection> directions =
      sample_directions(direction_rng, config.direction_count, config.sampler);
  const CoefficientCache cache(sample, config.sampler.max_index);
  const CvmEvaluator evaluator(sample, directions, cache);

  TestResult result;
  result.config = config;
  result.observed = evaluator.observed();

  const std::size_t replicates = static_cast<std::size_t>(config.replicates);
  result.boot_stats.resize(replicates);
  result.perm_stats.resize(replicates);
  parallel_for(replicates, config.threads, [&](std::size_t i) {
    RngStream rng = root.substream(stream_tag::bootstrap, i);
    result.boot_stats[i] = bootstrap_statistic(evaluator, rng);
  });
  parallel_for(replicates, config.threads, [&](std::size_t i) {
    RngStream rng = root.substream(stream_tag::permutation, i);
    result.perm_stats[i] = permutation_statistic(evaluator, rng);
  });

  result.p_boot = monte_carlo_p_value(result.observed, result.boot_stats);
  result.p_perm = monte_carlo_p_value(result.observed, result.perm_stats);
  result.reject_boot = result.p_boot <= config.alpha;
  result.reject_perm = result.p_perm <= config.alpha;
  return result;
}

}  // namespace fdhom
