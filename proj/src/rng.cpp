#include "foodland/rng.hpp"

namespace foodland {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  std::uint64_t s = master_seed;
  for (auto& v : seeds) v = splitmix64(s);
  return seeds;
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  // rejection below the largest multiple of n to avoid modulo bias
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace foodland
