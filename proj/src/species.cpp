#include "tpic/species.hpp"

#include <cmath>

#include "tpic/rng.hpp"

namespace tpic {

double charge_per_particle(const SpeciesSpec& sp, const SimConfig& cfg) {
    const double sign = sp.m_over_q < 0.0 ? -1.0 : 1.0;
    return sign * sp.density * cfg.dx * cfg.dy / (sp.ppc.x * sp.ppc.y);
}

double mass_per_particle(const SpeciesSpec& sp, const SimConfig& cfg) {
    return std::fabs(charge_per_particle(sp, cfg) * sp.m_over_q);
}

void append_column(std::vector<Particle>& out, const SpeciesSpec& sp, const SimConfig& cfg,
                   std::uint64_t seed, std::uint64_t stream, int local_ix,
                   std::int64_t global_column) {
    const std::uint64_t col_key =
        rng::key_combine(stream, static_cast<std::uint64_t>(global_column));
    const bool thermal = sp.u_th.x != 0.0 || sp.u_th.y != 0.0 || sp.u_th.z != 0.0;

    for (int iy = 0; iy < cfg.ny; ++iy) {
        const std::uint64_t row_key = rng::key_combine(col_key, static_cast<std::uint64_t>(iy));
        for (int ky = 0; ky < sp.ppc.y; ++ky) {
            for (int kx = 0; kx < sp.ppc.x; ++kx) {
                Particle p;
                p.ix = local_ix;
                p.iy = iy;
                p.x = (kx + 0.5) / sp.ppc.x;
                p.y = (ky + 0.5) / sp.ppc.y;
                p.u = sp.u_fl;
                if (thermal) {
                    const std::uint64_t site = rng::key_combine(
                        row_key, static_cast<std::uint64_t>(ky) * sp.ppc.x + kx);
                    p.u.x += sp.u_th.x * rng::gaussian(seed, 4 * site + 0);
                    p.u.y += sp.u_th.y * rng::gaussian(seed, 4 * site + 1);
                    p.u.z += sp.u_th.z * rng::gaussian(seed, 4 * site + 2);
                }
                out.push_back(p);
            }
        }
    }
}

std::vector<Particle> init_species(const SpeciesSpec& sp, const SimConfig& cfg,
                                   std::uint64_t seed, std::uint64_t stream) {
    std::vector<Particle> out;
    out.reserve(static_cast<std::size_t>(cfg.nx) * cfg.ny * sp.ppc.x * sp.ppc.y);
    for (int ix = 0; ix < cfg.nx; ++ix) {
        append_column(out, sp, cfg, seed, stream, ix, ix);
    }
    return out;
}

}  // namespace tpic
