#pragma once

#include <cmath>

#include "tpic/grid.hpp"
#include "tpic/vec3.hpp"

namespace tpic {

/// One straight piece of a particle trajectory confined to a single cell.
/// Endpoints are relative to the base cell; a coordinate equal to 1.0 sits
/// exactly on the far face.
struct Segment {
    int ix = 0;
    int iy = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;
};

/// Cut the path from (x0, y0) to (x1, y1), both given in the frame of cell
/// (ix, iy), at every cell face it crosses. The end point lies in (-1, 2) on
/// each axis, so at most one face per axis is crossed and the result is 1 to 3
/// segments. Cut points land exactly on the face coordinate, and consecutive
/// segments share their cut point in global coordinates.
inline int split_trajectory(int ix, int iy, double x0, double y0, double x1, double y1,
                            Segment out[3]) {
    const int dix = x1 >= 1.0 ? 1 : (x1 < 0.0 ? -1 : 0);
    const int diy = y1 >= 1.0 ? 1 : (y1 < 0.0 ? -1 : 0);

    double tx = 2.0, ty = 2.0;
    if (dix != 0) tx = ((dix > 0 ? 1.0 : 0.0) - x0) / (x1 - x0);
    if (diy != 0) ty = ((diy > 0 ? 1.0 : 0.0) - y0) / (y1 - y0);

    // Cut parameters in crossing order; axis 0 cuts an x face, 1 a y face.
    int axes[2];
    double ts[2];
    int ncut = 0;
    if (dix != 0 && diy != 0) {
        if (tx <= ty) {
            ts[0] = tx; axes[0] = 0; ts[1] = ty; axes[1] = 1;
        } else {
            ts[0] = ty; axes[0] = 1; ts[1] = tx; axes[1] = 0;
        }
        ncut = 2;
    } else if (dix != 0) {
        ts[0] = tx; axes[0] = 0; ncut = 1;
    } else if (diy != 0) {
        ts[0] = ty; axes[0] = 1; ncut = 1;
    }

    int bx = ix, by = iy;   // base cell of the piece being emitted
    double cx = x0, cy = y0;  // its start point, in that cell's frame
    int n = 0;
    for (int k = 0; k < ncut; ++k) {
        double fx, fy;  // cut point in the original cell's frame
        if (axes[k] == 0) {
            fx = dix > 0 ? 1.0 : 0.0;
            fy = y0 + ts[k] * (y1 - y0);
        } else {
            fy = diy > 0 ? 1.0 : 0.0;
            fx = x0 + ts[k] * (x1 - x0);
        }
        out[n++] = {bx, by, cx, cy, fx - (bx - ix), fy - (by - iy)};
        if (axes[k] == 0) bx += dix; else by += diy;
        cx = fx - (bx - ix);
        cy = fy - (by - iy);
    }
    out[n++] = {bx, by, cx, cy, x1 - (bx - ix), y1 - (by - iy)};
    return n;
}

/// Deposit one segment. In-plane components get the charge-conserving flux
/// form: the x flux splits between the two Jx points of the base cell by the
/// mean y of the segment, and symmetrically for y. The out-of-plane current
/// spreads q * u_z / gamma bilinearly at the segment midpoint, scaled by the
/// fraction of the full trajectory this segment covers.
inline void deposit_segment(const Segment& s, double q, double uz_over_gamma, double frac,
                            double dt, double dx, double dy, Grid2<Vec3>& J) {
    const double mx = 0.5 * (s.x0 + s.x1);
    const double my = 0.5 * (s.y0 + s.y1);
    const double wx = s.x1 - s.x0;
    const double wy = s.y1 - s.y0;

    const double qx = q / (dy * dt) * wx;
    const double qy = q / (dx * dt) * wy;
    const double qz = q * uz_over_gamma * frac / (dx * dy);

    J(s.ix, s.iy).x += qx * (1.0 - my);
    J(s.ix, s.iy + 1).x += qx * my;

    J(s.ix, s.iy).y += qy * (1.0 - mx);
    J(s.ix + 1, s.iy).y += qy * mx;

    J(s.ix, s.iy).z += qz * (1.0 - mx) * (1.0 - my);
    J(s.ix + 1, s.iy).z += qz * mx * (1.0 - my);
    J(s.ix, s.iy + 1).z += qz * (1.0 - mx) * my;
    J(s.ix + 1, s.iy + 1).z += qz * mx * my;
}

/// Full deposit for one particle move: split at cell faces, then deposit each
/// piece. (x1, y1) is the end point in the frame of the starting cell
/// (ix, iy). Writes touch cells ix-1..ix+2 and iy-1..iy+2 at most, so a guard
/// width of 2 suffices.
inline void deposit_current(int ix, int iy, double x0, double y0, double x1, double y1,
                            double uz_over_gamma, double q, double dt, double dx, double dy,
                            Grid2<Vec3>& J) {
    Segment segs[3];
    const int n = split_trajectory(ix, iy, x0, y0, x1, y1, segs);

    const double tdx = x1 - x0, tdy = y1 - y0;
    for (int k = 0; k < n; ++k) {
        double frac = 1.0;
        if (n > 1) {
            // Parametric share of this piece; the longer axis gives the more
            // accurate quotient.
            if (std::fabs(tdx) >= std::fabs(tdy)) {
                frac = (segs[k].x1 - segs[k].x0) / tdx;
            } else {
                frac = (segs[k].y1 - segs[k].y0) / tdy;
            }
        }
        deposit_segment(segs[k], q, uz_over_gamma, frac, dt, dx, dy, J);
    }
}

}  // namespace tpic
