#pragma once

#include <cstdint>
#include <vector>

#include "tpic/engine.hpp"

namespace tpic::ref {

// Plainly written serial oracles used to cross-check the optimized paths.
// They share containers and configuration types with the engine but none of
// its stencil, weighting, or splitting code: indices wrap or clamp instead of
// using guard cells, and trajectories are split by walking parameter spans.

/// Node-centered charge density from bilinear weights. With periodic_x off,
/// weight falling past the right edge is dropped, matching an open boundary.
Grid2<double> charge_density(const std::vector<Particle>& ps, double q, int nx, int ny,
                             double dx, double dy, bool periodic_x = true);

/// Largest |div J + d(rho)/dt| over all nodes for one deposit step. J is read
/// on its interior with periodic wrapping, so fold guard deposits first.
double continuity_residual(const Grid2<double>& rho_before, const Grid2<double>& rho_after,
                           const Grid2<Vec3>& J, double dx, double dy, double dt);

/// Half-B, E, half-B field update written directly from the curl
/// differences. Touches interior cells only and leaves guards stale.
void naive_advance_emf(YeeGrid& emf, const CurrentGrid& current, double dt,
                       bool periodic_x = true);

/// One complete time step, serial and tile-free: gather, momentum, move,
/// deposit per particle, then filter, fields, and the window slide. Leaves
/// guard cells and tile bookkeeping stale; reports and further naive steps
/// never look at either.
void naive_step(SimState& s);

struct SortedParticles {
    std::vector<Particle> particles;
    std::vector<std::int64_t> tile_offset;
};

/// Group particles by tile with a stable comparison sort.
SortedParticles naive_sort(const std::vector<Particle>& ps, const TileGeometry& geom);

}  // namespace tpic::ref
