#pragma once

#include <cassert>
#include <vector>

namespace tpic {

/// Dense 2D array with a guard-cell halo on all four sides.
///
/// Valid indices run from -guard to n+guard-1 on each axis; [0, n) is the
/// interior. Cells along a row (same j) are contiguous in memory.
template <typename T>
class Grid2 {
public:
    Grid2() = default;
    Grid2(int nx, int ny, int guard)
        : nx_(nx),
          ny_(ny),
          guard_(guard),
          stride_(nx + 2 * guard),
          data_(static_cast<std::size_t>(nx + 2 * guard) * (ny + 2 * guard)) {
        assert(nx > 0 && ny > 0 && guard >= 0);
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int guard() const { return guard_; }

    T& operator()(int i, int j) {
        assert(i >= -guard_ && i < nx_ + guard_);
        assert(j >= -guard_ && j < ny_ + guard_);
        return data_[static_cast<std::size_t>(j + guard_) * stride_ + (i + guard_)];
    }
    const T& operator()(int i, int j) const {
        assert(i >= -guard_ && i < nx_ + guard_);
        assert(j >= -guard_ && j < ny_ + guard_);
        return data_[static_cast<std::size_t>(j + guard_) * stride_ + (i + guard_)];
    }

    void fill(const T& v) {
        for (auto& e : data_) e = v;
    }

    const std::vector<T>& raw() const { return data_; }

    friend bool operator==(const Grid2& a, const Grid2& b) {
        return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.guard_ == b.guard_ && a.data_ == b.data_;
    }

private:
    int nx_ = 0;
    int ny_ = 0;
    int guard_ = 0;
    int stride_ = 0;
    std::vector<T> data_;
};

}  // namespace tpic
