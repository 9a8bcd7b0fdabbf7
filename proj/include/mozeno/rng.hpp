// Seeded generator plus self-contained draw helpers.  The standard
// distributions are implementation-defined; these are not, so identical
// seeds give identical streams on every platform.
#pragma once

#include <cstdint>
#include <random>

namespace mozeno {

using Rng = std::mt19937_64;

/// splitmix64 step, used to derive independent sub-seeds.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Uniform integer in [0, n), n >= 1.  Rejection sampling, unbiased.
inline std::uint64_t draw_below(Rng& rng, std::uint64_t n) {
    if (n <= 1) { rng(); return 0; } // keep stream advancement uniform
    std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return x % n;
}

/// Uniform integer in [lo, hi] inclusive.
inline std::int64_t draw_range(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Uniform double in [0, 1).
inline double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool draw_bernoulli(Rng& rng, double p) { return draw_unit(rng) < p; }

} // namespace mozeno
