#include "tpic/fields.hpp"

namespace tpic {

void yee_b(YeeGrid& emf, double h) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
    const double hx = h / emf.dx, hy = h / emf.dy;
    auto& E = emf.E;
    auto& B = emf.B;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Vec3& b = B(i, j);
            b.x += -hy * (E(i, j + 1).z - E(i, j).z);
            b.y += hx * (E(i + 1, j).z - E(i, j).z);
            b.z += hy * (E(i, j + 1).x - E(i, j).x) - hx * (E(i + 1, j).y - E(i, j).y);
        }
    }
}

void yee_e(YeeGrid& emf, const CurrentGrid& current, double dt) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
    const double rx = dt / emf.dx, ry = dt / emf.dy;
    auto& E = emf.E;
    const auto& B = emf.B;
    const auto& J = current.J;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            Vec3& e = E(i, j);
            e.x += ry * (B(i, j).z - B(i, j - 1).z) - dt * J(i, j).x;
            e.y += -rx * (B(i, j).z - B(i - 1, j).z) - dt * J(i, j).y;
            e.z += rx * (B(i, j).y - B(i - 1, j).y) - ry * (B(i, j).x - B(i, j - 1).x) -
                   dt * J(i, j).z;
        }
    }
}

void advance_emf(YeeGrid& emf, const CurrentGrid& current, double dt, bool periodic_x) {
    yee_b(emf, 0.5 * dt);
    update_gc_copy(emf.B, periodic_x);
    yee_e(emf, current, dt);
    update_gc_copy(emf.E, periodic_x);
    yee_b(emf, 0.5 * dt);
    update_gc_copy(emf.B, periodic_x);
}

void binomial_filter(CurrentGrid& current, int passes, bool periodic_x) {
    if (passes <= 0) return;
    auto& J = current.J;
    const int nx = J.nx(), ny = J.ny();
    Grid2<Vec3> tmp = J;
    for (int p = 0; p < passes; ++p) {
        update_gc_copy(J, periodic_x);
        tmp = J;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                J(i, j) = 0.25 * tmp(i - 1, j) + 0.5 * tmp(i, j) + 0.25 * tmp(i + 1, j);
            }
        }
        update_gc_copy(J, periodic_x);
        tmp = J;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                J(i, j) = 0.25 * tmp(i, j - 1) + 0.5 * tmp(i, j) + 0.25 * tmp(i, j + 1);
            }
        }
        update_gc_copy(J, periodic_x);
    }
}

void shift_window(YeeGrid& emf) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx - 1; ++i) {
            emf.E(i, j) = emf.E(i + 1, j);
            emf.B(i, j) = emf.B(i + 1, j);
        }
        emf.E(nx - 1, j) = Vec3{};
        emf.B(nx - 1, j) = Vec3{};
    }
    update_gc_copy(emf.E, false);
    update_gc_copy(emf.B, false);
}

FieldEnergy field_energy(const YeeGrid& emf) {
    const int nx = emf.E.nx(), ny = emf.E.ny();
    const double cell = 0.5 * emf.dx * emf.dy;
    FieldEnergy out;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            out.e += cell * dot(emf.E(i, j), emf.E(i, j));
            out.b += cell * dot(emf.B(i, j), emf.B(i, j));
        }
    }
    return out;
}

}  // namespace tpic
