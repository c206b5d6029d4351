#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace foodland {

// All stochastic draws in the simulator go through the helpers below instead of
// <random> distributions. std::mt19937_64 output is fully specified by the
// standard, but distribution algorithms are not; pinning the sampling
// algorithms keeps run output reproducible across standard libraries.
using Rng = std::mt19937_64;

// splitmix64 step; used to derive independent per-run seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

// Derived seed list for an ensemble: seeds[i] depends only on (master, i).
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t n);

// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n), n >= 1 (rejection sampling).
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

// Standard normal via Box-Muller. The second value of each pair is discarded,
// which keeps every call site stateless.
inline double normal01(Rng& rng) {
  double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps log() finite
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Lognormal draw parameterized by its median and the standard deviation of the
// underlying normal. log_sd = 0 degenerates to a point mass at the median.
inline double lognormal_median(Rng& rng, double median, double log_sd) {
  return median * std::exp(log_sd * normal01(rng));
}

// Fisher-Yates shuffle with a pinned algorithm (std::shuffle is
// implementation-defined).
template <typename T>
void shuffle_pinned(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace foodland
