#pragma once

/// @file common.hpp
/// @brief Shared scalar types, the forbidden-edge sentinel and small RNG helpers.

#include <cstdint>
#include <random>
#include <stdexcept>

namespace combopt {

/// All edge/vector weights are 64-bit integers.
using Weight = std::int64_t;

/// Reserved weight marking a forbidden (suppressed) edge.
inline constexpr Weight kInfiniteWeight = Weight{1} << 62;

/// Saturating addition: anything at or above the sentinel stays at the sentinel.
inline Weight wadd(Weight a, Weight b) {
    if (a >= kInfiniteWeight || b >= kInfiniteWeight)
        return kInfiniteWeight;
    return a + b;
}

inline bool is_forbidden(Weight w) { return w >= kInfiniteWeight; }

/// Every stochastic operation takes an explicit 64-bit seed.
using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi], stable across platforms for a fixed engine.
inline int rand_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::size_t rand_index(Rng& rng, std::size_t size) {
    return static_cast<std::size_t>(rng() % size);
}

/// Uniform real in [0, 1).
inline double rand_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Thrown when a fixed cluster order admits no tour with finite weight.
class InfeasibleOrderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown for degenerate tour modifications (e.g. a 2-opt span of width one).
class InvalidMoveError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace combopt
