#pragma once

#include <cstdint>
#include <vector>

#include "tpic/config.hpp"
#include "tpic/particle.hpp"

namespace tpic {

/// Charge carried by one macro-particle of this species: the species charge
/// sign times density * dx * dy / (ppc_x * ppc_y), so that a unit-density
/// species deposits a unit charge density magnitude.
double charge_per_particle(const SpeciesSpec& sp, const SimConfig& cfg);

/// Mass of one macro-particle, |charge * m_over_q|.
double mass_per_particle(const SpeciesSpec& sp, const SimConfig& cfg);

/// Append the particles of one grid column. Sublattice positions are the cell
/// centers of a ppc_x x ppc_y lattice, offsets (k + 1/2) / ppc. Thermal
/// velocities are normal draws keyed by (stream, global_column, row,
/// sublattice site, component) under `seed`, so a column re-created later
/// (a moving window injecting at the right edge) reproduces the same
/// particles no matter when or on how many threads it is made.
void append_column(std::vector<Particle>& out, const SpeciesSpec& sp, const SimConfig& cfg,
                   std::uint64_t seed, std::uint64_t stream, int local_ix,
                   std::int64_t global_column);

/// Load a full species: every interior cell gets the same sublattice,
/// columns left to right. Returns nx * ny * ppc_x * ppc_y particles.
std::vector<Particle> init_species(const SpeciesSpec& sp, const SimConfig& cfg,
                                   std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace tpic
