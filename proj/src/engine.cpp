#include "tpic/engine.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <utility>

#include "tpic/deposit.hpp"
#include "tpic/pusher.hpp"

namespace tpic {

namespace {

/// Push and deposit every particle of one tile into a private current buffer.
/// Particle updates are independent, so this is safe from any thread; only
/// the buffer merge needs coordination.
void advance_tile(SpeciesState& sp, int t, const YeeGrid& emf, const SimConfig& cfg,
                  Grid2<Vec3>& buf) {
    const auto& geom = sp.map.geom;
    const int x0t = geom.tile_x0(t), y0t = geom.tile_y0(t);
    const double dt = cfg.dt, dx = cfg.dx, dy = cfg.dy;
    const double q = sp.q, qm = sp.q_over_m;
    const int nx = cfg.nx, ny = cfg.ny;
    const bool wrap_x = !cfg.moving_window;
    const auto& E = emf.E;
    const auto& B = emf.B;
    auto& particles = sp.map.particles;
    const auto& off = sp.map.tile_offset;

    for (std::int64_t k = off[t]; k < off[t + 1]; ++k) {
        Particle& p = particles[static_cast<std::size_t>(k)];
        const int lix = p.ix - x0t, liy = p.iy - y0t;
        const double x0 = p.x, y0 = p.y;

        const EmfAtParticle f = interpolate_emf(p, E, B);
        p.u = advance_momentum(p.u, f.e, f.b, qm, dt);
        const double uzg = p.u.z / lorentz_gamma(p.u);
        const CellShift d = push_position(p, dt, dx, dy);

        // Deposit in the frame of the starting cell; the buffer guard absorbs
        // writes up to two cells past the tile on each side.
        deposit_current(lix, liy, x0, y0, p.x + d.dix, p.y + d.diy, uzg, q, dt, dx, dy, buf);

        if (wrap_x) {
            if (p.ix < 0) p.ix += nx;
            else if (p.ix >= nx) p.ix -= nx;
        }
        if (p.iy < 0) p.iy += ny;
        else if (p.iy >= ny) p.iy -= ny;
    }
}

void merge_tile_ordered(Grid2<Vec3>& J, const Grid2<Vec3>& buf, int x0t, int y0t) {
    const int g = buf.guard();
    for (int lj = -g; lj < buf.ny() + g; ++lj) {
        for (int li = -g; li < buf.nx() + g; ++li) {
            J(x0t + li, y0t + lj) += buf(li, lj);
        }
    }
}

void merge_tile_atomic(Grid2<Vec3>& J, const Grid2<Vec3>& buf, int x0t, int y0t) {
    const int g = buf.guard();
    for (int lj = -g; lj < buf.ny() + g; ++lj) {
        for (int li = -g; li < buf.nx() + g; ++li) {
            const Vec3& v = buf(li, lj);
            Vec3& tgt = J(x0t + li, y0t + lj);
#pragma omp atomic
            tgt.x += v.x;
#pragma omp atomic
            tgt.y += v.y;
#pragma omp atomic
            tgt.z += v.z;
        }
    }
}

void advance_species(SpeciesState& sp, const YeeGrid& emf, CurrentGrid& current,
                     const SimConfig& cfg, bool fast) {
    const auto& geom = sp.map.geom;
    const int nt = geom.n_tiles();
    const int g = current.J.guard();
    auto& J = current.J;

    if (fast) {
#pragma omp parallel
        {
            Grid2<Vec3> buf(geom.tile_nx, geom.tile_ny, g);
#pragma omp for schedule(dynamic)
            for (int t = 0; t < nt; ++t) {
                buf.fill(Vec3{});
                advance_tile(sp, t, emf, cfg, buf);
                merge_tile_atomic(J, buf, geom.tile_x0(t), geom.tile_y0(t));
            }
        }
    } else {
        // Static round-robin schedule plus an ordered merge keeps the sums in
        // tile order, bitwise the same for every thread count.
#pragma omp parallel
        {
            Grid2<Vec3> buf(geom.tile_nx, geom.tile_ny, g);
#pragma omp for schedule(static, 1) ordered
            for (int t = 0; t < nt; ++t) {
                buf.fill(Vec3{});
                advance_tile(sp, t, emf, cfg, buf);
#pragma omp ordered
                merge_tile_ordered(J, buf, geom.tile_x0(t), geom.tile_y0(t));
            }
        }
    }
}

void slide_window(SimState& s) {
    const int nx = s.cfg.nx;
    shift_window(s.emf);
    for (std::size_t i = 0; i < s.species.size(); ++i) {
        auto& sp = s.species[i];
        auto& ps = sp.map.particles;
        // A particle now left of column 1 would fall off the trailing edge;
        // anything at or past nx left through the leading edge into space the
        // fresh column will repopulate.
        std::erase_if(ps, [nx](const Particle& p) { return p.ix < 1 || p.ix >= nx; });
        for (auto& p : ps) p.ix -= 1;
        append_column(ps, sp.spec, s.cfg, s.cfg.seed, i, nx - 1, s.window_offset + nx);
    }
    ++s.window_offset;
}

}  // namespace

SimState make_state(const SimConfig& cfg) {
    const ValidationReport rep = validate_config(cfg);
    if (!rep.ok()) {
        std::string msg = "invalid config:";
        for (const auto& e : rep.errors) msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }

    SimState s;
    s.cfg = cfg;
    s.emf = YeeGrid(cfg.nx, cfg.ny, cfg.guard, cfg.dx, cfg.dy);
    s.current = CurrentGrid(cfg.nx, cfg.ny, cfg.guard, cfg.dx, cfg.dy);
    update_gc_copy(s.emf.E, !cfg.moving_window);
    update_gc_copy(s.emf.B, !cfg.moving_window);

    for (std::size_t i = 0; i < cfg.species.size(); ++i) {
        const SpeciesSpec& spec = cfg.species[i];
        SpeciesState st;
        st.spec = spec;
        st.q = charge_per_particle(spec, cfg);
        st.m = mass_per_particle(spec, cfg);
        st.q_over_m = 1.0 / spec.m_over_q;
        st.map.geom = TileGeometry{cfg.nx, cfg.ny, cfg.tile_nx, cfg.tile_ny};
        st.map.particles = init_species(spec, cfg, cfg.seed, i);
        st.map.tile_offset.assign(static_cast<std::size_t>(st.map.geom.n_tiles()) + 1, 0);
        sort_tiles(st.map, false);
        s.species.push_back(std::move(st));
    }
    return s;
}

void step(SimState& s, const ExecPolicy& policy) {
    if (policy.threads > 0) omp_set_num_threads(policy.threads);
    const bool fast = policy.mode == ExecMode::fast;
    const bool periodic_x = !s.cfg.moving_window;

    s.current.J.fill(Vec3{});
    for (auto& sp : s.species) advance_species(sp, s.emf, s.current, s.cfg, fast);
    update_gc_add(s.current.J, periodic_x);

    if (s.cfg.filter_passes > 0) binomial_filter(s.current, s.cfg.filter_passes, periodic_x);

    advance_emf(s.emf, s.current, s.cfg.dt, periodic_x);

    if (s.cfg.moving_window) {
        const double t_next = static_cast<double>(s.step_index + 1) * s.cfg.dt;
        const bool shift_due =
            static_cast<std::int64_t>(std::floor(t_next / s.cfg.dx)) > s.window_offset;
        if (shift_due) {
            slide_window(s);
        } else {
            const int nx = s.cfg.nx;
            for (auto& sp : s.species) {
                std::erase_if(sp.map.particles,
                              [nx](const Particle& p) { return p.ix < 0 || p.ix >= nx; });
            }
        }
    }

    for (auto& sp : s.species) sort_tiles(sp.map, fast);
    ++s.step_index;
}

void run(SimState& s, std::int64_t n_steps, const ReportSink& sink, const ExecPolicy& policy) {
    const std::int64_t every = s.cfg.diag.report_every;
    for (std::int64_t n = 0; n < n_steps; ++n) {
        if (sink && every > 0 && s.step_index % every == 0) {
            for (auto& r : make_reports(s)) sink(r);
        }
        step(s, policy);
    }
    if (sink) {
        for (auto& r : make_reports(s)) sink(r);
    }
}

double kinetic_energy(const SpeciesState& sp) {
    double sum = 0.0;
    for (const Particle& p : sp.map.particles) sum += lorentz_gamma(p.u) - 1.0;
    return sp.m * sum;
}

double kinetic_energy(const SimState& s) {
    double sum = 0.0;
    for (const auto& sp : s.species) sum += kinetic_energy(sp);
    return sum;
}

namespace {

GridPayload payload_shell(const SimState& s, std::string name, int nx, int ny) {
    GridPayload p;
    p.name = std::move(name);
    p.step = s.step_index;
    p.nx = nx;
    p.ny = ny;
    p.dx = s.cfg.dx;
    p.dy = s.cfg.dy;
    p.time = static_cast<double>(s.step_index) * s.cfg.dt;
    p.data.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    return p;
}

GridPayload charge_report(const SimState& s, const SpeciesState& sp) {
    const SimConfig& c = s.cfg;
    Grid2<double> rho(c.nx, c.ny, c.guard);
    const double w = sp.q / (c.dx * c.dy);
    for (const Particle& p : sp.map.particles) {
        rho(p.ix, p.iy) += w * (1.0 - p.x) * (1.0 - p.y);
        rho(p.ix + 1, p.iy) += w * p.x * (1.0 - p.y);
        rho(p.ix, p.iy + 1) += w * (1.0 - p.x) * p.y;
        rho(p.ix + 1, p.iy + 1) += w * p.x * p.y;
    }
    update_gc_add(rho, !c.moving_window);

    GridPayload out = payload_shell(s, "charge-" + sp.spec.name, c.nx, c.ny);
    for (int j = 0; j < c.ny; ++j) {
        for (int i = 0; i < c.nx; ++i) {
            out.data[static_cast<std::size_t>(j) * c.nx + i] = rho(i, j);
        }
    }
    return out;
}

}  // namespace

std::vector<GridPayload> make_reports(const SimState& s) {
    const SimConfig& c = s.cfg;
    std::vector<GridPayload> out;

    if (c.diag.b_mag) {
        GridPayload p = payload_shell(s, "b_mag", c.nx, c.ny);
        for (int j = 0; j < c.ny; ++j) {
            for (int i = 0; i < c.nx; ++i) {
                p.data[static_cast<std::size_t>(j) * c.nx + i] = norm(s.emf.B(i, j));
            }
        }
        out.push_back(std::move(p));
    }
    if (c.diag.bz) {
        GridPayload p = payload_shell(s, "bz", c.nx, c.ny);
        for (int j = 0; j < c.ny; ++j) {
            for (int i = 0; i < c.nx; ++i) {
                p.data[static_cast<std::size_t>(j) * c.nx + i] = s.emf.B(i, j).z;
            }
        }
        out.push_back(std::move(p));
    }
    if (c.diag.charge) {
        for (const auto& sp : s.species) out.push_back(charge_report(s, sp));
    }
    if (c.diag.energy) {
        GridPayload p = payload_shell(s, "energy", 2, 1);
        const FieldEnergy fe = field_energy(s.emf);
        p.data[0] = fe.e;
        p.data[1] = fe.b;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace tpic
