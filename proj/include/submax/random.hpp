#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace submax {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent seed from a base seed and up to three stream
// coordinates, so parallel trials and per-(subset, round) substreams never
// share randomness.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(base + 0x9e3779b97f4a7c15ULL);
  s = mix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
  s = mix64(s ^ (b + 0x3c6ef372fe94f82bULL));
  s = mix64(s ^ (c + 0xd1b54a32d192ed03ULL));
  return s;
}

// Uniform double in [0, 1) built from the top 53 bits; stable across
// platforms, unlike std::uniform_real_distribution.
inline double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via Lemire's multiply-shift rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) return 0;
  while (true) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

// `r` distinct items drawn uniformly from `pool`, via partial Fisher-Yates.
// Returns all of `pool` (shuffled) when r >= pool.size().
inline std::vector<int> sample_without_replacement(Rng& rng,
                                                   std::vector<int> pool,
                                                   std::size_t r) {
  if (r > pool.size()) r = pool.size();
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(r);
  return pool;
}

// Inverse-CDF sampler for a fixed discrete distribution; O(log n) per draw.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probs) {
    cdf_.reserve(probs.size());
    double acc = 0.0;
    for (double p : probs) {
      acc += p;
      cdf_.push_back(acc);
    }
    if (!cdf_.empty()) cdf_.back() = 1.0;
  }

  int sample(Rng& rng) const {
    double u = uniform_double(rng);
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf_[mid] <= u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return static_cast<int>(lo);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace submax
