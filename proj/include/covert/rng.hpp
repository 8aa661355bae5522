#pragma once

// Deterministic sampling helpers. std::mt19937_64 output is pinned by the
// standard, but the std <random> distributions are implementation-defined;
// sampling goes through these helpers so results are reproducible everywhere.

#include <cstdint>
#include <random>
#include <span>

namespace covert {

inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), bound >= 1, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Inverse-CDF draw over the given pmf (atom order fixed by the caller).
inline std::size_t sample_index(std::mt19937_64& rng, std::span<const double> probs) {
  const double u = unit_double(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.empty() ? 0 : probs.size() - 1;
}

// splitmix64-style mixing for independent substreams of one master seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t x = master + 0x9E3779B97F4A7C15ull * (stream + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace covert
