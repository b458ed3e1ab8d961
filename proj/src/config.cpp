#include "tpic/config.hpp"

#include <cmath>
#include <stdexcept>

namespace tpic {

double courant_limit(double dx, double dy) {
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
        throw std::invalid_argument("courant_limit: cell spacings must be positive finite");
    }
    return 1.0 / std::sqrt(1.0 / (dx * dx) + 1.0 / (dy * dy));
}

namespace {

void check(ValidationReport& r, bool ok, const std::string& msg) {
    if (!ok) r.errors.push_back(msg);
}

}  // namespace

ValidationReport validate_config(const SimConfig& cfg) {
    ValidationReport r;

    check(r, cfg.nx > 0, "nx must be positive");
    check(r, cfg.ny > 0, "ny must be positive");
    check(r, cfg.dx > 0.0 && std::isfinite(cfg.dx), "dx must be positive finite");
    check(r, cfg.dy > 0.0 && std::isfinite(cfg.dy), "dy must be positive finite");
    check(r, cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive finite");
    check(r, cfg.n_steps >= 0, "n_steps must not be negative");

    if (cfg.dx > 0.0 && cfg.dy > 0.0 && cfg.dt > 0.0) {
        const double limit = courant_limit(cfg.dx, cfg.dy);
        check(r, cfg.dt < limit,
              "dt = " + std::to_string(cfg.dt) + " not below stable limit " +
                  std::to_string(limit));
    }

    check(r, cfg.tile_nx >= 2, "tile_nx must be at least 2");
    check(r, cfg.tile_ny >= 2, "tile_ny must be at least 2");
    if (cfg.tile_nx > 0 && cfg.nx > 0) {
        check(r, cfg.nx % cfg.tile_nx == 0, "tile_nx must divide nx");
    }
    if (cfg.tile_ny > 0 && cfg.ny > 0) {
        check(r, cfg.ny % cfg.tile_ny == 0, "tile_ny must divide ny");
    }
    // Interpolation reaches one cell back and a split deposit can touch two
    // cells forward, so anything below 2 would read or write past the halo.
    check(r, cfg.guard >= 2, "guard must be at least 2");

    check(r, cfg.filter_passes >= 0, "filter_passes must not be negative");

    for (const auto& sp : cfg.species) {
        const std::string tag = "species \"" + sp.name + "\": ";
        check(r, !sp.name.empty(), "species name must not be empty");
        check(r, sp.m_over_q != 0.0 && std::isfinite(sp.m_over_q),
              tag + "m_over_q must be nonzero finite");
        check(r, sp.ppc.x >= 1, tag + "ppc_x must be at least 1");
        check(r, sp.ppc.y >= 1, tag + "ppc_y must be at least 1");
        check(r, sp.density > 0.0 && std::isfinite(sp.density),
              tag + "density must be positive finite");
    }

    return r;
}

}  // namespace tpic
