#pragma once

#include <cmath>
#include <stdexcept>

namespace hj {

/// Uniform 1D mesh on [xmin, xmax] with m cells of width dx = (xmax-xmin)/m.
/// Node j sits at x(j) = xmin + j*dx. Dirichlet problems store nodes 0..m
/// (both endpoints), periodic problems store 0..m-1 with x(m) identified
/// with x(0).
struct Grid1D {
    double xmin = 0.0;
    double xmax = 1.0;
    int m = 4;
    double dx = 0.25;

    static Grid1D make(double xmin, double xmax, int m) {
        if (!(xmax > xmin))
            throw std::invalid_argument("Grid1D: xmax must exceed xmin");
        if (m < 4)
            throw std::invalid_argument("Grid1D: need m >= 4 (second-difference stencil)");
        Grid1D g;
        g.xmin = xmin;
        g.xmax = xmax;
        g.m = m;
        g.dx = (xmax - xmin) / m;
        return g;
    }

    double x(int j) const { return xmin + j * dx; }
    double length() const { return xmax - xmin; }
};

/// Tensor-product uniform mesh; spacings per axis are independent.
struct Grid2D {
    double xmin = 0.0, xmax = 1.0;
    double ymin = 0.0, ymax = 1.0;
    int mx = 4, my = 4;
    double dx = 0.25, dy = 0.25;

    static Grid2D make(double xmin, double xmax, int mx,
                       double ymin, double ymax, int my) {
        if (!(xmax > xmin) || !(ymax > ymin))
            throw std::invalid_argument("Grid2D: degenerate interval");
        if (mx < 4 || my < 4)
            throw std::invalid_argument("Grid2D: need mx, my >= 4");
        Grid2D g;
        g.xmin = xmin; g.xmax = xmax; g.mx = mx; g.dx = (xmax - xmin) / mx;
        g.ymin = ymin; g.ymax = ymax; g.my = my; g.dy = (ymax - ymin) / my;
        return g;
    }

    double x(int i) const { return xmin + i * dx; }
    double y(int j) const { return ymin + j * dy; }
};

/// Uniform partition of [0, T] into steps of size tau = T/n.
struct TimeGrid {
    double tfinal = 0.0;
    int steps = 0;
    double tau = 0.0;

    double t(int n) const { return n * tau; }

    /// Largest step count whose uniform tau does not exceed tau_max,
    /// i.e. n = ceil(T/tau_max) and tau = T/n re-derived so that n*tau = T.
    static TimeGrid cover(double tfinal, double tau_max) {
        if (!(tfinal > 0.0) || !(tau_max > 0.0))
            throw std::invalid_argument("TimeGrid: tfinal and tau_max must be positive");
        // the slack guards against ratios that are integers up to roundoff
        int n = static_cast<int>(std::ceil(tfinal / tau_max - 1e-9));
        if (n < 1) n = 1;
        TimeGrid tg;
        tg.tfinal = tfinal;
        tg.steps = n;
        tg.tau = tfinal / n;
        return tg;
    }
};

/// Time step from the 1D stability bound c0*tau/dx <= 1, scaled by the
/// requested Courant number: tau = cfl*dx/c0.
inline double tau_from_cfl(const Grid1D& grid, double cfl, double c0) {
    if (!(cfl > 0.0) || cfl > 1.0)
        throw std::invalid_argument("tau_from_cfl: cfl must lie in (0, 1]");
    if (!(c0 > 0.0))
        throw std::invalid_argument("tau_from_cfl: c0 must be positive");
    return cfl * grid.dx / c0;
}

/// 2D bound mu := c0*(tau/dx + tau/dy) <= 1, solved for tau at the
/// requested mu.
inline double tau_from_cfl_2d(const Grid2D& grid, double mu, double c0) {
    if (!(mu > 0.0) || mu > 1.0)
        throw std::invalid_argument("tau_from_cfl_2d: mu must lie in (0, 1]");
    if (!(c0 > 0.0))
        throw std::invalid_argument("tau_from_cfl_2d: c0 must be positive");
    return mu / (c0 * (1.0 / grid.dx + 1.0 / grid.dy));
}

} // namespace hj
