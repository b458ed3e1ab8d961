#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tpic/config.hpp"
#include "tpic/fields.hpp"
#include "tpic/species.hpp"
#include "tpic/tiling.hpp"

namespace tpic {

/// How a step distributes and merges work.
///
/// deterministic: tiles are processed with a fixed schedule and their current
/// contributions merge in tile order, so results are bitwise identical for
/// any thread count. fast: dynamic tile scheduling with atomic merges;
/// results vary in the last bits between runs but not beyond roundoff.
enum class ExecMode { deterministic, fast };

struct ExecPolicy {
    ExecMode mode = ExecMode::deterministic;
    int threads = 0;  // 0 keeps the runtime default
};

/// One species plus its derived per-particle constants and its tile-grouped
/// particle array.
struct SpeciesState {
    SpeciesSpec spec;
    double q = 0.0;         // charge per macro-particle
    double m = 0.0;         // mass per macro-particle
    double q_over_m = 0.0;  // 1 / m_over_q
    TileMap map;
};

/// One scalar diagnostic grid, row-major, data[j * nx + i].
struct GridPayload {
    std::string name;
    std::int64_t step = 0;
    int nx = 0;
    int ny = 0;
    double dx = 0.0;
    double dy = 0.0;
    double time = 0.0;
    std::vector<double> data;
};

using ReportSink = std::function<void(const GridPayload&)>;

struct SimState {
    SimConfig cfg;
    YeeGrid emf;
    CurrentGrid current;
    std::vector<SpeciesState> species;
    std::int64_t step_index = 0;
    std::int64_t window_offset = 0;  // columns the window has slid so far
};

/// Build a ready-to-run state: validate the config (throws
/// std::invalid_argument listing every violation), allocate fields, load and
/// tile-sort every species.
SimState make_state(const SimConfig& cfg);

/// Advance one time step: deposit currents tile by tile while pushing
/// particles, merge, filter, advance the fields, slide the window when due,
/// and restore tile order.
void step(SimState& s, const ExecPolicy& policy = {});

/// Step n_steps times, handing the standard report set to `sink` every
/// cfg.diag.report_every steps (measured from the current step index) and
/// once more for the final state. A report_every of zero or less reports the
/// final state only. Pass a null sink to run silently.
void run(SimState& s, std::int64_t n_steps, const ReportSink& sink = nullptr,
         const ExecPolicy& policy = {});

/// Total kinetic energy, sum of m * (gamma - 1) over all particles.
double kinetic_energy(const SpeciesState& sp);
double kinetic_energy(const SimState& s);

/// The reports enabled in cfg.diag, in a fixed order: |B| ("b_mag"), B.z
/// ("bz"), one charge-density grid per species ("charge-<name>"), and the
/// field energy pair ("energy", a 2x1 payload holding the E and B totals).
std::vector<GridPayload> make_reports(const SimState& s);

}  // namespace tpic
