#pragma once

#include <cstdint>
#include <random>

namespace eagle {

/// Seeded generator with hand-rolled draws. The standard specifies the
/// mt19937_64 stream exactly but not the distributions, so drawing
/// through this wrapper keeps synthetic corpora and sample selections
/// byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

  /// Uniform real in [lo, hi) with 53-bit resolution.
  double uniform_real(double lo, double hi) {
    const double unit =
        static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    return lo + (hi - lo) * unit;
  }

  bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eagle
