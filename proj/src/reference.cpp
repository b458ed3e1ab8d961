#include "tpic/reference.hpp"

#include <algorithm>
#include <cmath>

namespace tpic::ref {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

Grid2<double> charge_density(const std::vector<Particle>& ps, double q, int nx, int ny,
                             double dx, double dy, bool periodic_x) {
    Grid2<double> rho(nx, ny, 0);
    const double c = q / (dx * dy);
    for (const Particle& p : ps) {
        const int j0 = p.iy, j1 = wrap(p.iy + 1, ny);
        const double wx = p.x, wy = p.y;
        rho(p.ix, j0) += c * (1.0 - wx) * (1.0 - wy);
        rho(p.ix, j1) += c * (1.0 - wx) * wy;
        if (p.ix + 1 < nx || periodic_x) {
            const int i1 = wrap(p.ix + 1, nx);
            rho(i1, j0) += c * wx * (1.0 - wy);
            rho(i1, j1) += c * wx * wy;
        }
    }
    return rho;
}

double continuity_residual(const Grid2<double>& rho_before, const Grid2<double>& rho_after,
                           const Grid2<Vec3>& J, double dx, double dy, double dt) {
    const int nx = J.nx(), ny = J.ny();
    double worst = 0.0;
    for (int j = 0; j < ny; ++j) {
        const int jm = wrap(j - 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int im = wrap(i - 1, nx);
            const double div =
                (J(i, j).x - J(im, j).x) / dx + (J(i, j).y - J(i, jm).y) / dy;
            const double r = div + (rho_after(i, j) - rho_before(i, j)) / dt;
            worst = std::max(worst, std::fabs(r));
        }
    }
    return worst;
}

namespace {

void naive_yee_b(YeeGrid& emf, double h, bool periodic_x) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
    const double hx = h / emf.dx, hy = h / emf.dy;
    for (int j = 0; j < ny; ++j) {
        const int jp = wrap(j + 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int ip = periodic_x ? wrap(i + 1, nx) : std::min(i + 1, nx - 1);
            const auto& E = emf.E;
            Vec3& b = emf.B(i, j);
            b.x -= hy * (E(i, jp).z - E(i, j).z);
            b.y += hx * (E(ip, j).z - E(i, j).z);
            b.z += hy * (E(i, jp).x - E(i, j).x) - hx * (E(ip, j).y - E(i, j).y);
        }
    }
}

void naive_yee_e(YeeGrid& emf, const CurrentGrid& current, double dt, bool periodic_x) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
    const double rx = dt / emf.dx, ry = dt / emf.dy;
    for (int j = 0; j < ny; ++j) {
        const int jm = wrap(j - 1, ny);
        for (int i = 0; i < nx; ++i) {
            const int im = periodic_x ? wrap(i - 1, nx) : std::max(i - 1, 0);
            const auto& B = emf.B;
            const Vec3& jc = current.J(i, j);
            Vec3& e = emf.E(i, j);
            e.x += ry * (B(i, j).z - B(i, jm).z) - dt * jc.x;
            e.y += -rx * (B(i, j).z - B(im, j).z) - dt * jc.y;
            e.z += rx * (B(i, j).y - B(im, j).y) - ry * (B(i, j).x - B(i, jm).x) - dt * jc.z;
        }
    }
}

}  // namespace

void naive_advance_emf(YeeGrid& emf, const CurrentGrid& current, double dt, bool periodic_x) {
    naive_yee_b(emf, 0.5 * dt, periodic_x);
    naive_yee_e(emf, current, dt, periodic_x);
    naive_yee_b(emf, 0.5 * dt, periodic_x);
}

namespace {

/// Bilinear sample of one field component at a particle, by absolute grid
/// position relative to the component's (possibly half-shifted) lattice.
double sample(const Grid2<Vec3>& G, double Vec3::*comp, bool half_x, bool half_y,
              const Particle& p, bool periodic_x) {
    const int nx = G.nx(), ny = G.ny();
    const double gx = p.ix + p.x - (half_x ? 0.5 : 0.0);
    const double gy = p.iy + p.y - (half_y ? 0.5 : 0.0);
    const int i0 = static_cast<int>(std::floor(gx));
    const int j0 = static_cast<int>(std::floor(gy));
    const double wx = gx - i0, wy = gy - j0;

    auto cell = [&](int i, int j) -> double {
        i = periodic_x ? wrap(i, nx) : std::clamp(i, 0, nx - 1);
        j = wrap(j, ny);
        return G(i, j).*comp;
    };
    return (1.0 - wy) * ((1.0 - wx) * cell(i0, j0) + wx * cell(i0 + 1, j0)) +
           wy * ((1.0 - wx) * cell(i0, j0 + 1) + wx * cell(i0 + 1, j0 + 1));
}

void naive_deposit(Grid2<Vec3>& J, bool periodic_x, int ix, int iy, double x0, double y0,
                   double x1, double y1, double uz_over_g, double q, double dt, double dx,
                   double dy) {
    const int nx = J.nx(), ny = J.ny();

    // Parameter values where the straight path meets a cell face, as a span
    // list; at most one face per axis since the end point is within one cell.
    double ts[4] = {0.0, 1.0, 0.0, 0.0};
    int n = 2;
    if (x1 >= 1.0 || x1 < 0.0) ts[n++] = ((x1 >= 1.0 ? 1.0 : 0.0) - x0) / (x1 - x0);
    if (y1 >= 1.0 || y1 < 0.0) ts[n++] = ((y1 >= 1.0 ? 1.0 : 0.0) - y0) / (y1 - y0);
    std::sort(ts, ts + n);

    auto add = [&](int i, int j, int comp, double v) {
        if (periodic_x) {
            i = wrap(i, nx);
        } else if (i < 0 || i >= nx) {
            return;
        }
        j = wrap(j, ny);
        Vec3& c3 = J(i, j);
        if (comp == 0) c3.x += v;
        else if (comp == 1) c3.y += v;
        else c3.z += v;
    };

    for (int k = 0; k + 1 < n; ++k) {
        const double ta = ts[k], tb = ts[k + 1];
        // The span midpoint decides which cell this piece lies in.
        const double xm = x0 + 0.5 * (ta + tb) * (x1 - x0);
        const double ym = y0 + 0.5 * (ta + tb) * (y1 - y0);
        const int cx = static_cast<int>(std::floor(xm));
        const int cy = static_cast<int>(std::floor(ym));
        const int bi = ix + cx, bj = iy + cy;

        const double xa = x0 + ta * (x1 - x0) - cx, xb = x0 + tb * (x1 - x0) - cx;
        const double ya = y0 + ta * (y1 - y0) - cy, yb = y0 + tb * (y1 - y0) - cy;
        const double mx = 0.5 * (xa + xb), my = 0.5 * (ya + yb);

        const double fx = q / (dy * dt) * (xb - xa);
        const double fy = q / (dx * dt) * (yb - ya);
        const double fz = q * uz_over_g * (tb - ta) / (dx * dy);

        add(bi, bj, 0, fx * (1.0 - my));
        add(bi, bj + 1, 0, fx * my);
        add(bi, bj, 1, fy * (1.0 - mx));
        add(bi + 1, bj, 1, fy * mx);
        add(bi, bj, 2, fz * (1.0 - mx) * (1.0 - my));
        add(bi + 1, bj, 2, fz * mx * (1.0 - my));
        add(bi, bj + 1, 2, fz * (1.0 - mx) * my);
        add(bi + 1, bj + 1, 2, fz * mx * my);
    }
}

void naive_filter(Grid2<Vec3>& J, int passes, bool periodic_x) {
    const int nx = J.nx(), ny = J.ny();
    Grid2<Vec3> t(nx, ny, 0);
    for (int p = 0; p < passes; ++p) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) t(i, j) = J(i, j);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int il = periodic_x ? wrap(i - 1, nx) : std::max(i - 1, 0);
                const int ir = periodic_x ? wrap(i + 1, nx) : std::min(i + 1, nx - 1);
                J(i, j) = 0.25 * t(il, j) + 0.5 * t(i, j) + 0.25 * t(ir, j);
            }
        }
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) t(i, j) = J(i, j);
        for (int j = 0; j < ny; ++j) {
            const int jd = wrap(j - 1, ny), ju = wrap(j + 1, ny);
            for (int i = 0; i < nx; ++i) {
                J(i, j) = 0.25 * t(i, jd) + 0.5 * t(i, j) + 0.25 * t(i, ju);
            }
        }
    }
}

}  // namespace

void naive_step(SimState& s) {
    const SimConfig& c = s.cfg;
    const bool px = !c.moving_window;
    const int nx = c.nx, ny = c.ny;
    auto& J = s.current.J;
    J.fill(Vec3{});

    for (auto& sp : s.species) {
        const double k = 0.5 * c.dt * sp.q_over_m;
        for (Particle& p : sp.map.particles) {
            const double ex = sample(s.emf.E, &Vec3::x, true, false, p, px);
            const double ey = sample(s.emf.E, &Vec3::y, false, true, p, px);
            const double ez = sample(s.emf.E, &Vec3::z, false, false, p, px);
            const double bx = sample(s.emf.B, &Vec3::x, false, true, p, px);
            const double by = sample(s.emf.B, &Vec3::y, true, false, p, px);
            const double bz = sample(s.emf.B, &Vec3::z, true, true, p, px);

            const double umx = p.u.x + k * ex;
            const double umy = p.u.y + k * ey;
            const double umz = p.u.z + k * ez;
            const double gt = std::sqrt(1.0 + umx * umx + umy * umy + umz * umz);
            const double tx = k * bx / gt, ty = k * by / gt, tz = k * bz / gt;
            const double upx = umx + (umy * tz - umz * ty);
            const double upy = umy + (umz * tx - umx * tz);
            const double upz = umz + (umx * ty - umy * tx);
            const double s2 = 2.0 / (1.0 + tx * tx + ty * ty + tz * tz);
            p.u.x = umx + (upy * tz * s2 - upz * ty * s2) + k * ex;
            p.u.y = umy + (upz * tx * s2 - upx * tz * s2) + k * ey;
            p.u.z = umz + (upx * ty * s2 - upy * tx * s2) + k * ez;

            const double ig =
                1.0 / std::sqrt(1.0 + p.u.x * p.u.x + p.u.y * p.u.y + p.u.z * p.u.z);
            const double x0 = p.x, y0 = p.y;
            double xn = p.x + p.u.x * ig * c.dt / c.dx;
            double yn = p.y + p.u.y * ig * c.dt / c.dy;
            int dix = 0, diy = 0;
            if (xn >= 1.0) { xn -= 1.0; dix = 1; }
            else if (xn < 0.0) { xn += 1.0; dix = -1; }
            if (yn >= 1.0) { yn -= 1.0; diy = 1; }
            else if (yn < 0.0) { yn += 1.0; diy = -1; }

            naive_deposit(J, px, p.ix, p.iy, x0, y0, xn + dix, yn + diy, p.u.z * ig, sp.q,
                          c.dt, c.dx, c.dy);

            p.x = xn;
            p.y = yn;
            p.ix += dix;
            p.iy += diy;
            if (px) p.ix = wrap(p.ix, nx);
            p.iy = wrap(p.iy, ny);
        }
    }

    if (c.filter_passes > 0) naive_filter(J, c.filter_passes, px);
    naive_advance_emf(s.emf, s.current, c.dt, px);

    if (c.moving_window) {
        const double t_next = static_cast<double>(s.step_index + 1) * c.dt;
        const bool due = static_cast<std::int64_t>(std::floor(t_next / c.dx)) > s.window_offset;
        if (due) {
            for (int j = 0; j < ny; ++j) {
                for (int i = 0; i < nx - 1; ++i) {
                    s.emf.E(i, j) = s.emf.E(i + 1, j);
                    s.emf.B(i, j) = s.emf.B(i + 1, j);
                }
                s.emf.E(nx - 1, j) = Vec3{};
                s.emf.B(nx - 1, j) = Vec3{};
            }
            for (std::size_t i = 0; i < s.species.size(); ++i) {
                auto& ps = s.species[i].map.particles;
                std::erase_if(ps, [nx](const Particle& p) { return p.ix < 1 || p.ix >= nx; });
                for (auto& p : ps) p.ix -= 1;
                append_column(ps, s.species[i].spec, c, c.seed, i, nx - 1,
                              s.window_offset + nx);
            }
            ++s.window_offset;
        } else {
            for (auto& sp : s.species) {
                std::erase_if(sp.map.particles,
                              [nx](const Particle& p) { return p.ix < 0 || p.ix >= nx; });
            }
        }
    }

    ++s.step_index;
}

SortedParticles naive_sort(const std::vector<Particle>& ps, const TileGeometry& geom) {
    SortedParticles out;
    out.particles = ps;
    std::stable_sort(out.particles.begin(), out.particles.end(),
                     [&geom](const Particle& a, const Particle& b) {
                         return geom.tile_of(a.ix, a.iy) < geom.tile_of(b.ix, b.iy);
                     });
    const int nt = geom.n_tiles();
    out.tile_offset.assign(static_cast<std::size_t>(nt) + 1, 0);
    for (const Particle& p : out.particles) {
        ++out.tile_offset[static_cast<std::size_t>(geom.tile_of(p.ix, p.iy)) + 1];
    }
    for (int t = 0; t < nt; ++t) out.tile_offset[t + 1] += out.tile_offset[t];
    return out;
}

}  // namespace tpic::ref
