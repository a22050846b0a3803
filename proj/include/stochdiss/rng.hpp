#ifndef STOCHDISS_RNG_HPP
#define STOCHDISS_RNG_HPP

#include <cstdint>
#include <random>

namespace stochdiss {

using RandomEngine = std::mt19937_64;

/// Seed of the stream owned by (master seed, sweep cell, realization).
/// A pure function of its arguments, so a realization draws the same numbers
/// no matter which worker runs it or in what order.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t realization);

/// Engine for one stream; the seed is expanded through std::seed_seq.
RandomEngine make_engine(std::uint64_t seed);

}  // namespace stochdiss

#endif  // STOCHDISS_RNG_HPP
