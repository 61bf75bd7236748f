#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace fdhom {

// Substream labels. Streams are derived from (seed, tag, index), so every
// replicate/run owns an independent generator regardless of scheduling.
namespace stream_tag {
inline constexpr std::uint64_t directions = 1;
inline constexpr std::uint64_t bootstrap = 2;
inline constexpr std::uint64_t permutation = 3;
inline constexpr std::uint64_t study_data = 4;
inline constexpr std::uint64_t study_test = 5;
inline constexpr std::uint64_t scenario = 6;
}  // namespace stream_tag

namespace detail {
// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

inline constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag,
                                           std::uint64_t index) {
  return detail::mix64(detail::mix64(detail::mix64(root) ^ tag) ^ index);
}

// Seeded random stream. The engine is std::mt19937_64 (bit-reproducible per the
// standard); the distributions are implemented here because the standard library
// leaves std::normal_distribution et al. implementation-defined, which would
// break cross-toolchain reproducibility of seeded outputs.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream addressed by (tag, index); derivation uses the root
  // seed, not the current state, so it is order-insensitive.
  RngStream substream(std::uint64_t tag, std::uint64_t index = 0) const {
    return RngStream(derive_seed(seed_, tag, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); safe as a log() argument.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in {0, ..., bound-1}, rejection sampled (no modulo bias).
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  bool flip() { return (engine_() >> 63) != 0; }

  // Standard normal, Box-Muller with cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Poisson by Knuth's product method; intended for small means (the direction
  // sampler uses mean 1).
  int poisson(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("poisson: mean must be positive");
    const double limit = std::exp(-mean);
    int count = 0;
    double product = 1.0;
    do {
      ++count;
      product *= uniform_open();
    } while (product > limit);
    return count - 1;
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fdhom
