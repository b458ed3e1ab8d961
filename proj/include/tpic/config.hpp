#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpic/vec3.hpp"

namespace tpic {

/// Particles per cell along each axis.
struct PerCell {
    int x = 1;
    int y = 1;

    bool operator==(const PerCell&) const = default;
};

/// Static description of one particle species.
///
/// m_over_q is the mass-to-charge ratio in simulation units (electron: -1).
/// u_fl is the fluid (drift) proper velocity, u_th the thermal spread applied
/// per component on top of it. density is in units of the reference density.
struct SpeciesSpec {
    std::string name;
    double m_over_q = -1.0;
    PerCell ppc{};
    Vec3 u_fl{};
    Vec3 u_th{};
    double density = 1.0;

    bool operator==(const SpeciesSpec&) const = default;
};

/// Which scalar grids a run writes out.
struct Diagnostics {
    std::int64_t report_every = 100;  // <= 0 means final step only
    bool b_mag = true;
    bool bz = true;
    bool charge = true;
    bool energy = true;

    bool operator==(const Diagnostics&) const = default;
};

/// Full description of a run. Everything the engine needs is here; two states
/// built from equal configs evolve identically.
struct SimConfig {
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double dt = 0.0;
    std::int64_t n_steps = 0;
    std::uint64_t seed = 1234;

    int tile_nx = 0;
    int tile_ny = 0;
    int guard = 3;

    std::vector<SpeciesSpec> species;

    Diagnostics diag{};

    int filter_passes = 0;
    bool moving_window = false;

    bool operator==(const SimConfig&) const = default;
};

/// Upper bound on the stable time step, 1 / sqrt(1/dx^2 + 1/dy^2).
/// Throws std::invalid_argument unless both spacings are positive and finite.
double courant_limit(double dx, double dy);

/// Outcome of validate_config. Empty error list means the config is usable.
struct ValidationReport {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

/// Check every structural invariant of a config and report all violations at
/// once: positive extents and spacings, dt below the stable limit, tile sizes
/// at least 2 that divide the grid, guard width at least 2, and per-species
/// sanity (nonzero m_over_q, at least one particle per cell).
ValidationReport validate_config(const SimConfig& cfg);

}  // namespace tpic
