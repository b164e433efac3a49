#pragma once

#include <cstdint>
#include <random>

namespace sympsurf {

// Deterministic uniform sampling. The raw mt19937_64 stream is pinned by the
// standard, and the mapping to doubles below is fixed arithmetic, so seeded
// sequences are identical across platforms and standard libraries — unlike
// std::uniform_real_distribution, whose algorithm is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in the inclusive range [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(gen_() % span);
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace sympsurf
