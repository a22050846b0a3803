#include "stochdiss/rng.hpp"

namespace stochdiss {

namespace {
// SplitMix64 finaliser.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t realization) {
  return mix(mix(mix(master) ^ cell) ^ realization);
}

RandomEngine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return RandomEngine(seq);
}

}  // namespace stochdiss
