#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hj/field.hpp"
#include "hj/filter.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/march.hpp"

namespace hj {

namespace detail {
// Dirichlet updates touch interior nodes only; the endpoints are pinned.
inline std::pair<int, int> update_range(const Field1D& u, const BoundaryCondition1D& bc) {
    if (bc.is_periodic()) return {0, u.size()};
    return {1, u.size() - 1};
}

inline void pin_boundary(Field1D& u, const BoundaryCondition1D& bc, double t) {
    if (bc.is_periodic()) return;
    u(0) = bc.value(t, u.x(0));
    u(u.size() - 1) = bc.value(t, u.x(u.size() - 1));
}
} // namespace detail

/// Forward Euler update with a monotone numerical Hamiltonian,
///   u_j <- u_j - tau * h(x_j, D-u_j, D+u_j).
inline Field1D monotone_euler_step_1d(const Field1D& u, const NumHamiltonian1D& h,
                                      const BoundaryCondition1D& bc, double t, double tau) {
    Field1D w = u;
    fill_ghosts(w, bc, t);
    Field1D out = w;
    const double dx = w.dx();
    auto [lo, hi] = detail::update_range(w, bc);
    for (int j = lo; j < hi; ++j) {
        const auto d = first_order_derivatives(w, j, dx);
        out(j) = w(j) - tau * h(w.x(j), d.minus, d.plus);
    }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Forward Euler update with the centered difference fed to the analytic
/// Hamiltonian. Second order in space, not monotone and not stable on its
/// own in general.
inline Field1D centered_euler_step_1d(const Field1D& u, const Hamiltonian1D& H,
                                      const BoundaryCondition1D& bc, double t, double tau) {
    Field1D w = u;
    fill_ghosts(w, bc, t);
    Field1D out = w;
    const double dx = w.dx();
    auto [lo, hi] = detail::update_range(w, bc);
    for (int j = lo; j < hi; ++j) {
        const double p = (w(j + 1) - w(j - 1)) / (2.0 * dx);
        out(j) = w(j) - tau * H(w.x(j), p);
    }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Forward Euler update feeding the non-oscillatory second-order one-sided
/// derivatives into the monotone flux.
inline Field1D eno2_euler_step_1d(const Field1D& u, const NumHamiltonian1D& h,
                                  const BoundaryCondition1D& bc, double t, double tau) {
    Field1D w = u;
    fill_ghosts(w, bc, t);
    Field1D out = w;
    const double dx = w.dx();
    auto [lo, hi] = detail::update_range(w, bc);
    for (int j = lo; j < hi; ++j) {
        const auto d = eno2_derivatives(w, j, dx);
        out(j) = w(j) - tau * h(w.x(j), d.minus, d.plus);
    }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Heun composition of a one-stage operator: S(u) = (u + S0(S0(u))) / 2.
/// The inner stage is evaluated at t + tau; the spatial operator (including
/// any reconstruction) is re-applied at that stage.
template <class Stage>
Field1D rk2_compose_1d(Stage&& s0, const Field1D& u, const BoundaryCondition1D& bc,
                       double t, double tau) {
    Field1D mid = s0(u, t);
    Field1D two = s0(mid, t + tau);
    Field1D out = u;
    for (int j = 0; j < u.size(); ++j) out(j) = 0.5 * (u(j) + two(j));
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Blend the monotone and high-order predictions through the filter,
///   out_j = sm_j + eps*tau * F((sa_j - sm_j)/(eps*tau)).
/// Where |sa - sm| <= eps*tau both filters reduce to the identity, and the
/// high-order value is taken verbatim so the switch is exact.
inline Field1D filtered_combine(const Field1D& sm, const Field1D& sa, FilterKind filter,
                                double eps, double tau, StepReport* report = nullptr) {
    if (!(eps > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("filtered_combine: eps and tau must be positive");
    const double margin = eps * tau;
    Field1D out = sm;
    int inside = 0;
    double max_arg = 0.0;
    for (int j = 0; j < sm.size(); ++j) {
        const double d = sa(j) - sm(j);
        max_arg = std::max(max_arg, std::abs(d) / margin);
        if (std::abs(d) <= margin) {
            out(j) = sa(j);
            ++inside;
        } else if (filter == FilterKind::cutoff) {
            out(j) = sm(j);
        } else {
            out(j) = sm(j) + margin * filter_eval(filter, d / margin);
        }
    }
    if (report) {
        report->high_order_fraction = static_cast<double>(inside) / sm.size();
        report->max_filter_argument = max_arg;
    }
    return out;
}

/// Clamp proposed high-order flux values into the admissible range around
/// local extrema, at nodes where the propagation speed changes sign:
///   hbar_j = min(max(hA_j, (u_j - umax_j)/tau), (u_j - umin_j)/tau)
/// with umin/umax over the three-point neighborhood. Other nodes pass
/// through untouched.
inline std::vector<double> limiter_extrema_1d(const Field1D& u_ghosted,
                                              const std::vector<double>& ha,
                                              const std::function<bool(double)>& trigger,
                                              double tau) {
    std::vector<double> out = ha;
    for (int j = 0; j < u_ghosted.size(); ++j) {
        if (trigger && !trigger(u_ghosted.x(j))) continue;
        const double umin = std::min({u_ghosted(j - 1), u_ghosted(j), u_ghosted(j + 1)});
        const double umax = std::max({u_ghosted(j - 1), u_ghosted(j), u_ghosted(j + 1)});
        const double hmax = (u_ghosted(j) - umin) / tau;
        const double hmin = (u_ghosted(j) - umax) / tau;
        out[static_cast<size_t>(j)] = std::min(std::max(ha[static_cast<size_t>(j)], hmin), hmax);
    }
    return out;
}

/// Equivalent action of the extrema limiter applied directly to the
/// high-order step values: clamping hA into [hmin, hmax] is the same as
/// clamping S_A into the three-point range of the previous iterate.
inline Field1D clamp_extrema_1d(const Field1D& u_prev_ghosted, Field1D sa,
                                const std::function<bool(double)>& trigger) {
    for (int j = 0; j < sa.size(); ++j) {
        if (trigger && !trigger(sa.x(j))) continue;
        const double umin =
            std::min({u_prev_ghosted(j - 1), u_prev_ghosted(j), u_prev_ghosted(j + 1)});
        const double umax =
            std::max({u_prev_ghosted(j - 1), u_prev_ghosted(j), u_prev_ghosted(j + 1)});
        sa(j) = std::clamp(sa(j), umin, umax);
    }
    return sa;
}

/// Enforce the obstacle constraint u >= g nodewise after a step.
inline void apply_obstacle(Field1D& u, const std::vector<double>& g) {
    if (g.empty()) return;
    for (int j = 0; j < u.size(); ++j) u(j) = std::max(u(j), g[static_cast<size_t>(j)]);
}

// ---------------------------------------------------------------------------
// Semi-Lagrangian monotone step
// ---------------------------------------------------------------------------

/// Min-max controlled dynamics x' = f(x, a, b) with running cost l(x, a, b),
/// control sets discretized to finite lists.
struct SlDynamics1D {
    std::vector<double> controls_a;
    std::vector<double> controls_b; // may hold a single dummy entry
    std::function<double(double x, double a, double b)> f;
    std::function<double(double x, double a, double b)> ell;
};

/// Piecewise linear interpolation of a ghost-filled field at an arbitrary
/// point of the extended domain.
inline double p1_interpolate(const Field1D& u_ghosted, double xq) {
    const Grid1D& g = u_ghosted.grid();
    const double s = (xq - g.xmin) / g.dx;
    int j = static_cast<int>(std::floor(s));
    if (j < -kGhostWidth || j + 1 > u_ghosted.size() - 1 + kGhostWidth)
        throw std::domain_error("p1_interpolate: point outside extended domain");
    const double theta = s - j;
    return (1.0 - theta) * u_ghosted(j) + theta * u_ghosted(j + 1);
}

/// One semi-Lagrangian step,
///   u_j <- min_a max_b ( [u](x_j + tau f(x_j,a,b)) + tau l(x_j,a,b) ).
inline Field1D sl_monotone_step_1d(const Field1D& u, const SlDynamics1D& dyn,
                                   const BoundaryCondition1D& bc, double t, double tau) {
    if (dyn.controls_a.empty() || dyn.controls_b.empty())
        throw std::invalid_argument("sl_monotone_step_1d: empty control set");
    Field1D w = u;
    fill_ghosts(w, bc, t);
    Field1D out = w;
    const Grid1D& g = w.grid();
    const double period = g.length();
    auto [lo, hi] = detail::update_range(w, bc);
    for (int j = lo; j < hi; ++j) {
        const double xj = w.x(j);
        double best_a = std::numeric_limits<double>::infinity();
        for (double a : dyn.controls_a) {
            double best_b = -std::numeric_limits<double>::infinity();
            for (double b : dyn.controls_b) {
                double foot = xj + tau * dyn.f(xj, a, b);
                if (bc.is_periodic())
                    foot = g.xmin + std::fmod(std::fmod(foot - g.xmin, period) + period, period);
                const double val = p1_interpolate(w, foot) + tau * dyn.ell(xj, a, b);
                best_b = std::max(best_b, val);
            }
            best_a = std::min(best_a, best_b);
        }
        out(j) = best_a;
    }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

// ---------------------------------------------------------------------------
// Assembled one-step operators
// ---------------------------------------------------------------------------

enum class HighOrderKind { centered, eno2 };

/// Full filtered update: monotone prediction, (optionally limited)
/// high-order prediction, filter blend, then the obstacle cut if present.
struct FilteredStep1D {
    NumHamiltonian1D h_monotone;
    Hamiltonian1D H;            // analytic Hamiltonian for the centered stage
    HighOrderKind high_order = HighOrderKind::centered;
    BoundaryCondition1D bc;
    FilterKind filter = FilterKind::cutoff;
    double eps = 0.0;
    double tau = 0.0;
    bool limiter = false;
    std::function<bool(double)> limiter_trigger; // empty = limit everywhere
    std::vector<double> obstacle;                // empty = unconstrained

    Field1D operator()(const Field1D& u, double t, StepReport& report) const {
        Field1D sm = monotone_euler_step_1d(u, h_monotone, bc, t, tau);
        auto stage = [this](const Field1D& v, double ts) {
            return high_order == HighOrderKind::centered
                       ? centered_euler_step_1d(v, H, bc, ts, tau)
                       : eno2_euler_step_1d(v, h_monotone, bc, ts, tau);
        };
        Field1D sa = rk2_compose_1d(stage, u, bc, t, tau);
        if (limiter) {
            Field1D w = u;
            fill_ghosts(w, bc, t);
            sa = clamp_extrema_1d(w, std::move(sa), limiter_trigger);
        }
        Field1D out = filtered_combine(sm, sa, filter, eps, tau, &report);
        apply_obstacle(out, obstacle);
        return out;
    }
};

/// Unfiltered one-step operators sharing the same obstacle handling.
struct PlainStep1D {
    enum class Kind { monotone, centered, eno2, sl };

    Kind kind = Kind::monotone;
    NumHamiltonian1D h_monotone;
    Hamiltonian1D H;
    SlDynamics1D sl;
    BoundaryCondition1D bc;
    double tau = 0.0;
    std::vector<double> obstacle;

    Field1D operator()(const Field1D& u, double t, StepReport&) const {
        Field1D out;
        switch (kind) {
        case Kind::monotone:
            out = monotone_euler_step_1d(u, h_monotone, bc, t, tau);
            break;
        case Kind::centered: {
            auto stage = [this](const Field1D& v, double ts) {
                return centered_euler_step_1d(v, H, bc, ts, tau);
            };
            out = rk2_compose_1d(stage, u, bc, t, tau);
            break;
        }
        case Kind::eno2: {
            auto stage = [this](const Field1D& v, double ts) {
                return eno2_euler_step_1d(v, h_monotone, bc, ts, tau);
            };
            out = rk2_compose_1d(stage, u, bc, t, tau);
            break;
        }
        case Kind::sl:
            out = sl_monotone_step_1d(u, sl, bc, t, tau);
            break;
        }
        apply_obstacle(out, obstacle);
        return out;
    }
};

} // namespace hj
