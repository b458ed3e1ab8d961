#pragma once

#include <utility>

#include "tpic/grid.hpp"
#include "tpic/vec3.hpp"

namespace tpic {

/// Electromagnetic field pair on a staggered (Yee) mesh.
///
/// Component (i, j) of each array lives at:
///   E.x (i+1/2, j)      B.x (i, j+1/2)
///   E.y (i, j+1/2)      B.y (i+1/2, j)
///   E.z (i, j)          B.z (i+1/2, j+1/2)
/// in units of the cell spacing. Cell (i, j) spans [i, i+1) x [j, j+1).
struct YeeGrid {
    Grid2<Vec3> E;
    Grid2<Vec3> B;
    double dx = 0.0;
    double dy = 0.0;

    YeeGrid() = default;
    YeeGrid(int nx, int ny, int guard, double dx_, double dy_)
        : E(nx, ny, guard), B(nx, ny, guard), dx(dx_), dy(dy_) {}
};

/// Current density on the same mesh. J.x, J.y, J.z sit at the E.x, E.y, E.z
/// points respectively.
struct CurrentGrid {
    Grid2<Vec3> J;
    double dx = 0.0;
    double dy = 0.0;

    CurrentGrid() = default;
    CurrentGrid(int nx, int ny, int guard, double dx_, double dy_)
        : J(nx, ny, guard), dx(dx_), dy(dy_) {}
};

/// Refresh the guard halo from the interior. Periodic in y always; in x either
/// periodic or clamped to the edge column (used once the window starts moving).
template <typename T>
void update_gc_copy(Grid2<T>& g, bool periodic_x = true) {
    const int nx = g.nx(), ny = g.ny(), gc = g.guard();
    for (int j = 0; j < ny; ++j) {
        for (int k = 0; k < gc; ++k) {
            g(-1 - k, j) = periodic_x ? g(nx - 1 - k, j) : g(0, j);
            g(nx + k, j) = periodic_x ? g(k, j) : g(nx - 1, j);
        }
    }
    // Full rows so the corners pick up the x guards filled above.
    for (int j = 0; j < gc; ++j) {
        for (int i = -gc; i < nx + gc; ++i) {
            g(i, -1 - j) = g(i, ny - 1 - j);
            g(i, ny + j) = g(i, j);
        }
    }
}

/// Fold guard-cell deposits back onto their interior images and zero the
/// guards. With periodic_x off, x-guard deposits are discarded instead of
/// wrapped; rows still fold in y.
template <typename T>
void update_gc_add(Grid2<T>& g, bool periodic_x = true) {
    const int nx = g.nx(), ny = g.ny(), gc = g.guard();
    // x first, over the full j range so corner deposits migrate inward.
    for (int j = -gc; j < ny + gc; ++j) {
        for (int k = 0; k < gc; ++k) {
            if (periodic_x) {
                g(nx - 1 - k, j) += g(-1 - k, j);
                g(k, j) += g(nx + k, j);
            }
            g(-1 - k, j) = T{};
            g(nx + k, j) = T{};
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < gc; ++j) {
            g(i, ny - 1 - j) += g(i, -1 - j);
            g(i, j) += g(i, ny + j);
            g(i, -1 - j) = T{};
            g(i, ny + j) = T{};
        }
    }
}

/// Advance B by h using the curl of E (finds E guards fresh, leaves B guards
/// stale).
void yee_b(YeeGrid& emf, double h);

/// Advance E by dt using the curl of B minus J (finds B guards fresh, leaves
/// E guards stale).
void yee_e(YeeGrid& emf, const CurrentGrid& current, double dt);

/// One leapfrogged field step: half B, full E, half B, refreshing guards
/// between the sub-steps.
void advance_emf(YeeGrid& emf, const CurrentGrid& current, double dt, bool periodic_x = true);

/// Smooth J with a 1-2-1 kernel along x then y, `passes` times. Refreshes
/// guards as it goes; conserves the interior sum under periodic boundaries.
void binomial_filter(CurrentGrid& current, int passes, bool periodic_x = true);

/// Slide the field arrays one column left; the new rightmost column is vacuum.
void shift_window(YeeGrid& emf);

struct FieldEnergy {
    double e = 0.0;
    double b = 0.0;
};

/// Interior field energy, sum(|F|^2) * dx * dy / 2 per field.
FieldEnergy field_energy(const YeeGrid& emf);

}  // namespace tpic
