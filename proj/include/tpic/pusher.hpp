#pragma once

#include <stdexcept>

#include "tpic/grid.hpp"
#include "tpic/particle.hpp"
#include "tpic/vec3.hpp"

namespace tpic {

/// Field values gathered at one particle's position.
struct EmfAtParticle {
    Vec3 e;
    Vec3 b;
};

/// Bilinear gather of E and B at a particle, honoring each component's
/// staggered location. A component shifted by half a cell interpolates between
/// the two points bracketing the particle, which may pull in the cell to the
/// left or below; guards must be fresh. Exact for fields linear in position.
inline EmfAtParticle interpolate_emf(const Particle& p, const Grid2<Vec3>& E,
                                     const Grid2<Vec3>& B) {
    const int i = p.ix, j = p.iy;
    const double wxn = p.x, wyn = p.y;

    int ih = i;
    double wxh = p.x - 0.5;
    if (wxh < 0.0) {
        ih = i - 1;
        wxh += 1.0;
    }
    int jh = j;
    double wyh = p.y - 0.5;
    if (wyh < 0.0) {
        jh = j - 1;
        wyh += 1.0;
    }

    EmfAtParticle f;
    f.e.x = (1.0 - wyn) * ((1.0 - wxh) * E(ih, j).x + wxh * E(ih + 1, j).x) +
            wyn * ((1.0 - wxh) * E(ih, j + 1).x + wxh * E(ih + 1, j + 1).x);
    f.e.y = (1.0 - wyh) * ((1.0 - wxn) * E(i, jh).y + wxn * E(i + 1, jh).y) +
            wyh * ((1.0 - wxn) * E(i, jh + 1).y + wxn * E(i + 1, jh + 1).y);
    f.e.z = (1.0 - wyn) * ((1.0 - wxn) * E(i, j).z + wxn * E(i + 1, j).z) +
            wyn * ((1.0 - wxn) * E(i, j + 1).z + wxn * E(i + 1, j + 1).z);
    f.b.x = (1.0 - wyh) * ((1.0 - wxn) * B(i, jh).x + wxn * B(i + 1, jh).x) +
            wyh * ((1.0 - wxn) * B(i, jh + 1).x + wxn * B(i + 1, jh + 1).x);
    f.b.y = (1.0 - wyn) * ((1.0 - wxh) * B(ih, j).y + wxh * B(ih + 1, j).y) +
            wyn * ((1.0 - wxh) * B(ih, j + 1).y + wxh * B(ih + 1, j + 1).y);
    f.b.z = (1.0 - wyh) * ((1.0 - wxh) * B(ih, jh).z + wxh * B(ih + 1, jh).z) +
            wyh * ((1.0 - wxh) * B(ih, jh + 1).z + wxh * B(ih + 1, jh + 1).z);
    return f;
}

/// One Boris step for the proper velocity: half electric push, magnetic
/// rotation at the midpoint gamma, half electric push. Pure rotation when
/// e is zero, so |u| is preserved exactly up to roundoff.
inline Vec3 advance_momentum(const Vec3& u, const Vec3& e, const Vec3& b, double q_over_m,
                             double dt) {
    const double k = 0.5 * dt * q_over_m;
    const Vec3 um = u + k * e;
    const double g = lorentz_gamma(um);
    const Vec3 t = (k / g) * b;
    const Vec3 up = um + cross(um, t);
    const Vec3 s = (2.0 / (1.0 + dot(t, t))) * t;
    const Vec3 uplus = um + cross(up, s);
    return uplus + k * e;
}

/// Signed cell-boundary crossings from one position push.
struct CellShift {
    int dix = 0;
    int diy = 0;
};

/// Move a particle by u/gamma * dt and renormalize its cell offsets back into
/// [0, 1). A particle landing exactly on a boundary belongs to the next cell
/// at offset 0. Throws if the displacement reaches a full cell, which a dt
/// below the stable limit rules out.
inline CellShift push_position(Particle& p, double dt, double dx, double dy) {
    const double rg = 1.0 / lorentz_gamma(p.u);
    const double ddx = p.u.x * rg * dt / dx;
    const double ddy = p.u.y * rg * dt / dy;
    if (!(ddx > -1.0 && ddx < 1.0 && ddy > -1.0 && ddy < 1.0)) {
        throw std::runtime_error("push_position: displacement of a full cell or more (dt above "
                                 "the stable limit?)");
    }
    double xn = p.x + ddx;
    double yn = p.y + ddy;
    CellShift d;
    if (xn >= 1.0) {
        xn -= 1.0;
        d.dix = 1;
    } else if (xn < 0.0) {
        xn += 1.0;
        d.dix = -1;
    }
    if (yn >= 1.0) {
        yn -= 1.0;
        d.diy = 1;
    } else if (yn < 0.0) {
        yn += 1.0;
        d.diy = -1;
    }
    p.x = xn;
    p.y = yn;
    p.ix += d.dix;
    p.iy += d.diy;
    return d;
}

}  // namespace tpic
