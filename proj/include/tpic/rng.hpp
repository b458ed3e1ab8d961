#pragma once

#include <cmath>
#include <cstdint>

namespace tpic::rng {

// Counter-based generator built on the random-access form of the splitmix64
// sequence: draw k of stream s is finalize(s + k * golden). Any (seed, counter)
// pair maps to the same value on every platform and thread count, so particle
// loading can be keyed by lattice site instead of by draw order.

inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t raw(std::uint64_t seed, std::uint64_t counter) {
    return finalize(seed + golden * (counter + 1));
}

/// Fold an extra index into a key. Chain calls to build multi-index keys.
constexpr std::uint64_t key_combine(std::uint64_t key, std::uint64_t v) {
    return finalize(key ^ (v + golden));
}

/// Uniform draw in (0, 1]. The closed upper end keeps log() finite below.
inline double uniform_oc(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>((raw(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal via Box-Muller, consuming counters 2k and 2k+1.
inline double gaussian(std::uint64_t seed, std::uint64_t k) {
    const double u1 = uniform_oc(seed, 2 * k);
    const double u2 = uniform_oc(seed, 2 * k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace tpic::rng
