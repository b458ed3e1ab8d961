#pragma once

#include <cstdint>

#include "tpic/vec3.hpp"

namespace tpic {

/// One macro-particle. Position is split into an integer cell index and an
/// offset inside that cell, so coordinates stay fully resolved no matter how
/// large the grid gets. Invariants: 0 <= x < 1 and 0 <= y < 1.
/// u is the proper velocity (momentum per unit mass), gamma * v.
struct Particle {
    std::int32_t ix = 0;
    std::int32_t iy = 0;
    double x = 0.0;
    double y = 0.0;
    Vec3 u{};

    bool operator==(const Particle&) const = default;
};

/// gamma = sqrt(1 + u.u) for proper velocity u (c = 1).
inline double lorentz_gamma(const Vec3& u) { return std::sqrt(1.0 + dot(u, u)); }

}  // namespace tpic
