#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hj/grid.hpp"

namespace hj {

/// Fixed ghost layer width. Two is enough for every stencil in the library
/// (the second-difference reconstruction reads u at j-2..j+2).
inline constexpr int kGhostWidth = 2;

/// Boundary treatment for a 1D field.
///
/// Dirichlet carries a space-time value g(t, x): ghost nodes and the two
/// boundary nodes are pinned to it. Periodic wraps indices with period
/// equal to the stored node count.
struct BoundaryCondition1D {
    enum class Kind { dirichlet, periodic };

    Kind kind = Kind::periodic;
    std::function<double(double, double)> value; // (t, x) -> boundary value

    static BoundaryCondition1D periodic() { return {}; }

    static BoundaryCondition1D dirichlet(double constant) {
        BoundaryCondition1D bc;
        bc.kind = Kind::dirichlet;
        bc.value = [constant](double, double) { return constant; };
        return bc;
    }

    static BoundaryCondition1D dirichlet(std::function<double(double, double)> fn) {
        BoundaryCondition1D bc;
        bc.kind = Kind::dirichlet;
        bc.value = std::move(fn);
        return bc;
    }

    bool is_periodic() const { return kind == Kind::periodic; }

    /// Stored node count on a grid: periodic fields drop the duplicate
    /// right endpoint.
    int node_count(const Grid1D& g) const {
        return is_periodic() ? g.m : g.m + 1;
    }
};

/// Discrete solution values on one time level, with a two-node ghost layer
/// on each side. Index j runs over -2 .. size()+1; 0 .. size()-1 are the
/// physical nodes.
class Field1D {
public:
    Field1D() = default;

    Field1D(Grid1D grid, int nodes)
        : grid_(grid), n_(nodes), data_(static_cast<size_t>(nodes) + 2 * kGhostWidth, 0.0) {
        if (nodes < 4) throw std::invalid_argument("Field1D: too few nodes");
    }

    static Field1D sample(const Grid1D& grid, const BoundaryCondition1D& bc,
                          const std::function<double(double)>& f) {
        Field1D u(grid, bc.node_count(grid));
        for (int j = 0; j < u.size(); ++j) u(j) = f(grid.x(j));
        return u;
    }

    int size() const { return n_; }
    const Grid1D& grid() const { return grid_; }
    double dx() const { return grid_.dx; }
    double x(int j) const { return grid_.x(j); }

    double& operator()(int j) { return data_[static_cast<size_t>(j + kGhostWidth)]; }
    double operator()(int j) const { return data_[static_cast<size_t>(j + kGhostWidth)]; }

    bool all_finite() const {
        for (int j = 0; j < n_; ++j)
            if (!std::isfinite((*this)(j))) return false;
        return true;
    }

private:
    Grid1D grid_;
    int n_ = 0;
    std::vector<double> data_;
};

/// Populate the ghost layer (and pin boundary nodes under Dirichlet data).
/// Idempotent: a second application at the same time is a no-op.
inline void fill_ghosts(Field1D& u, const BoundaryCondition1D& bc, double t) {
    const int n = u.size();
    if (bc.is_periodic()) {
        for (int k = 1; k <= kGhostWidth; ++k) {
            u(-k) = u(n - k);
            u(n - 1 + k) = u(k - 1);
        }
    } else {
        u(0) = bc.value(t, u.x(0));
        u(n - 1) = bc.value(t, u.x(n - 1));
        for (int k = 1; k <= kGhostWidth; ++k) {
            u(-k) = bc.value(t, u.x(-k));
            u(n - 1 + k) = bc.value(t, u.x(n - 1 + k));
        }
    }
}

/// 2D counterpart of BoundaryCondition1D. Only constant-in-space Dirichlet
/// data appears in the benchmarks, but the value may depend on (t, x, y).
struct BoundaryCondition2D {
    enum class Kind { dirichlet, periodic };

    Kind kind = Kind::dirichlet;
    std::function<double(double, double, double)> value;

    static BoundaryCondition2D dirichlet(double constant) {
        BoundaryCondition2D bc;
        bc.value = [constant](double, double, double) { return constant; };
        return bc;
    }

    static BoundaryCondition2D periodic() {
        BoundaryCondition2D bc;
        bc.kind = Kind::periodic;
        return bc;
    }

    bool is_periodic() const { return kind == Kind::periodic; }
    int nx(const Grid2D& g) const { return is_periodic() ? g.mx : g.mx + 1; }
    int ny(const Grid2D& g) const { return is_periodic() ? g.my : g.my + 1; }
};

/// Node-indexed 2D field with a two-node ghost frame, row-major storage.
class Field2D {
public:
    Field2D() = default;

    Field2D(Grid2D grid, int nx, int ny)
        : grid_(grid), nx_(nx), ny_(ny),
          stride_(static_cast<size_t>(ny) + 2 * kGhostWidth),
          data_((static_cast<size_t>(nx) + 2 * kGhostWidth) * stride_, 0.0) {
        if (nx < 4 || ny < 4) throw std::invalid_argument("Field2D: too few nodes");
    }

    static Field2D sample(const Grid2D& grid, const BoundaryCondition2D& bc,
                          const std::function<double(double, double)>& f) {
        Field2D u(grid, bc.nx(grid), bc.ny(grid));
        for (int i = 0; i < u.nx(); ++i)
            for (int j = 0; j < u.ny(); ++j)
                u(i, j) = f(grid.x(i), grid.y(j));
        return u;
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    const Grid2D& grid() const { return grid_; }

    double& operator()(int i, int j) {
        return data_[static_cast<size_t>(i + kGhostWidth) * stride_
                     + static_cast<size_t>(j + kGhostWidth)];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<size_t>(i + kGhostWidth) * stride_
                     + static_cast<size_t>(j + kGhostWidth)];
    }

    bool all_finite() const {
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j)
                if (!std::isfinite((*this)(i, j))) return false;
        return true;
    }

private:
    Grid2D grid_;
    int nx_ = 0, ny_ = 0;
    size_t stride_ = 0;
    std::vector<double> data_;
};

inline void fill_ghosts(Field2D& u, const BoundaryCondition2D& bc, double t) {
    const int nx = u.nx(), ny = u.ny();
    if (bc.is_periodic()) {
        for (int i = 0; i < nx; ++i)
            for (int k = 1; k <= kGhostWidth; ++k) {
                u(i, -k) = u(i, ny - k);
                u(i, ny - 1 + k) = u(i, k - 1);
            }
        for (int j = -kGhostWidth; j < ny + kGhostWidth; ++j)
            for (int k = 1; k <= kGhostWidth; ++k) {
                u(-k, j) = u(nx - k, j);
                u(nx - 1 + k, j) = u(k - 1, j);
            }
        return;
    }
    const Grid2D& g = u.grid();
    // pin the boundary ring
    for (int i = 0; i < nx; ++i) {
        u(i, 0) = bc.value(t, g.x(i), g.y(0));
        u(i, ny - 1) = bc.value(t, g.x(i), g.y(ny - 1));
    }
    for (int j = 0; j < ny; ++j) {
        u(0, j) = bc.value(t, g.x(0), g.y(j));
        u(nx - 1, j) = bc.value(t, g.x(nx - 1), g.y(j));
    }
    // ghost frame
    for (int i = -kGhostWidth; i < nx + kGhostWidth; ++i)
        for (int k = 1; k <= kGhostWidth; ++k) {
            u(i, -k) = bc.value(t, g.x(i), g.y(-k));
            u(i, ny - 1 + k) = bc.value(t, g.x(i), g.y(ny - 1 + k));
        }
    for (int j = 0; j < ny; ++j)
        for (int k = 1; k <= kGhostWidth; ++k) {
            u(-k, j) = bc.value(t, g.x(-k), g.y(j));
            u(nx - 1 + k, j) = bc.value(t, g.x(nx - 1 + k), g.y(j));
        }
}

} // namespace hj
