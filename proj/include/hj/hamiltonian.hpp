#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "hj/field.hpp"

namespace hj {

/// Analytic Hamiltonians H(x, p) resp. H(x, y, px, py).
using Hamiltonian1D = std::function<double(double x, double p)>;
using Hamiltonian2D = std::function<double(double x, double y, double px, double py)>;

/// Monotone numerical Hamiltonians h(x, u-, u+) evaluated on one-sided
/// difference quotients; nondecreasing in u-, nonincreasing in u+ under the
/// scheme's step-size bound, and h(x, u, u) = H(x, u).
using NumHamiltonian1D = std::function<double(double x, double um, double up)>;
using NumHamiltonian2D =
    std::function<double(double x, double y, double uxm, double uxp, double uym, double uyp)>;

/// One-sided derivative estimates at a node.
struct DerivativePair {
    double minus = 0.0;
    double plus = 0.0;
};

inline double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) <= std::abs(b) ? a : b;
}

/// Second-order non-oscillatory one-sided derivatives,
///   Dbar(+-) u_j = D(+-) u_j -+ (dx/2) * minmod(D2 u_j, D2 u_{j+-1}),
/// with D2 the standard second difference. Needs u at j-2..j+2.
inline DerivativePair eno2_derivatives(const Field1D& u, int j, double dx) {
    const double d2c = (u(j + 1) - 2.0 * u(j) + u(j - 1)) / (dx * dx);
    const double d2m = (u(j) - 2.0 * u(j - 1) + u(j - 2)) / (dx * dx);
    const double d2p = (u(j + 2) - 2.0 * u(j + 1) + u(j)) / (dx * dx);
    DerivativePair d;
    d.minus = (u(j) - u(j - 1)) / dx + 0.5 * dx * minmod(d2c, d2m);
    d.plus = (u(j + 1) - u(j)) / dx - 0.5 * dx * minmod(d2c, d2p);
    return d;
}

inline DerivativePair first_order_derivatives(const Field1D& u, int j, double dx) {
    return {(u(j) - u(j - 1)) / dx, (u(j + 1) - u(j)) / dx};
}

/// Projection of a high-order derivative estimate y onto the band
/// [a - b, a + b] around the first-order difference a.
enum class ProjectionMode { clamp, reset };

inline double project_derivative(double a, double b, double y, ProjectionMode mode) {
    if (mode == ProjectionMode::clamp) return std::clamp(y, a - b, a + b);
    return (y >= a - b && y <= a + b) ? y : a;
}

// ---------------------------------------------------------------------------
// Monotone numerical Hamiltonians used by the benchmark problems.
// ---------------------------------------------------------------------------

/// Upwind flux for H(p) = |p|.
inline double h_upwind_eikonal(double /*x*/, double um, double up) {
    return std::max(um, -up);
}

/// Upwind flux for H(p) = p^2/2.
inline double h_upwind_burgers(double /*x*/, double um, double up) {
    double h = 0.0;
    if (um > 0.0) h += 0.5 * um * um;
    if (up < 0.0) h += 0.5 * up * up;
    return h;
}

/// Lax-Friedrichs flux H(x, (u- + u+)/2) - (c0/2)(u+ - u-); monotone when
/// c0 dominates |dH/dp| and c0*tau/dx <= 1.
inline NumHamiltonian1D h_lax_friedrichs(Hamiltonian1D H, double c0) {
    return [H = std::move(H), c0](double x, double um, double up) {
        return H(x, 0.5 * (um + up)) - 0.5 * c0 * (up - um);
    };
}

/// 2D Lax-Friedrichs flux with per-axis dissipation constants.
inline NumHamiltonian2D h_lf_2d(Hamiltonian2D H, double cx, double cy) {
    return [H = std::move(H), cx, cy](double x, double y, double uxm, double uxp,
                                      double uym, double uyp) {
        return H(x, y, 0.5 * (uxm + uxp), 0.5 * (uym + uyp))
               - 0.5 * cx * (uxp - uxm) - 0.5 * cy * (uyp - uym);
    };
}

/// Sign-of-velocity upwinding for v_t + f1 v_x + f2 v_y = 0 written with
/// H = f1 px + f2 py.
inline NumHamiltonian2D h_upwind_advection_2d(std::function<double(double, double)> f1,
                                              std::function<double(double, double)> f2) {
    return [f1 = std::move(f1), f2 = std::move(f2)](double x, double y, double uxm,
                                                    double uxp, double uym, double uyp) {
        const double a = f1(x, y);
        const double b = f2(x, y);
        return std::max(0.0, a) * uxm + std::min(0.0, a) * uxp
               + std::max(0.0, b) * uym + std::min(0.0, b) * uyp;
    };
}

} // namespace hj
