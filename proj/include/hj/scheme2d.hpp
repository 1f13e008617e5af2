#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "hj/field.hpp"
#include "hj/filter.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/march.hpp"

namespace hj {

namespace detail {
struct Range2D {
    int ilo, ihi, jlo, jhi;
};

inline Range2D update_range(const Field2D& u, const BoundaryCondition2D& bc) {
    if (bc.is_periodic()) return {0, u.nx(), 0, u.ny()};
    return {1, u.nx() - 1, 1, u.ny() - 1};
}

inline void pin_boundary(Field2D& u, const BoundaryCondition2D& bc, double t) {
    if (bc.is_periodic()) return;
    const Grid2D& g = u.grid();
    for (int i = 0; i < u.nx(); ++i) {
        u(i, 0) = bc.value(t, g.x(i), g.y(0));
        u(i, u.ny() - 1) = bc.value(t, g.x(i), g.y(u.ny() - 1));
    }
    for (int j = 0; j < u.ny(); ++j) {
        u(0, j) = bc.value(t, g.x(0), g.y(j));
        u(u.nx() - 1, j) = bc.value(t, g.x(u.nx() - 1), g.y(j));
    }
}
} // namespace detail

inline Field2D monotone_euler_step_2d(const Field2D& u, const NumHamiltonian2D& h,
                                      const BoundaryCondition2D& bc, double t, double tau) {
    Field2D w = u;
    fill_ghosts(w, bc, t);
    Field2D out = w;
    const Grid2D& g = w.grid();
    const auto r = detail::update_range(w, bc);
    for (int i = r.ilo; i < r.ihi; ++i)
        for (int j = r.jlo; j < r.jhi; ++j) {
            const double uxm = (w(i, j) - w(i - 1, j)) / g.dx;
            const double uxp = (w(i + 1, j) - w(i, j)) / g.dx;
            const double uym = (w(i, j) - w(i, j - 1)) / g.dy;
            const double uyp = (w(i, j + 1) - w(i, j)) / g.dy;
            out(i, j) = w(i, j) - tau * h(g.x(i), g.y(j), uxm, uxp, uym, uyp);
        }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

inline Field2D centered_euler_step_2d(const Field2D& u, const Hamiltonian2D& H,
                                      const BoundaryCondition2D& bc, double t, double tau) {
    Field2D w = u;
    fill_ghosts(w, bc, t);
    Field2D out = w;
    const Grid2D& g = w.grid();
    const auto r = detail::update_range(w, bc);
    for (int i = r.ilo; i < r.ihi; ++i)
        for (int j = r.jlo; j < r.jhi; ++j) {
            const double px = (w(i + 1, j) - w(i - 1, j)) / (2.0 * g.dx);
            const double py = (w(i, j + 1) - w(i, j - 1)) / (2.0 * g.dy);
            out(i, j) = w(i, j) - tau * H(g.x(i), g.y(j), px, py);
        }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Axis-by-axis non-oscillatory reconstruction fed into the monotone flux.
inline Field2D eno2_euler_step_2d(const Field2D& u, const NumHamiltonian2D& h,
                                  const BoundaryCondition2D& bc, double t, double tau) {
    Field2D w = u;
    fill_ghosts(w, bc, t);
    Field2D out = w;
    const Grid2D& g = w.grid();
    const auto r = detail::update_range(w, bc);
    const double dx2 = g.dx * g.dx, dy2 = g.dy * g.dy;
    for (int i = r.ilo; i < r.ihi; ++i)
        for (int j = r.jlo; j < r.jhi; ++j) {
            const double d2xc = (w(i + 1, j) - 2.0 * w(i, j) + w(i - 1, j)) / dx2;
            const double d2xm = (w(i, j) - 2.0 * w(i - 1, j) + w(i - 2, j)) / dx2;
            const double d2xp = (w(i + 2, j) - 2.0 * w(i + 1, j) + w(i, j)) / dx2;
            const double uxm = (w(i, j) - w(i - 1, j)) / g.dx + 0.5 * g.dx * minmod(d2xc, d2xm);
            const double uxp = (w(i + 1, j) - w(i, j)) / g.dx - 0.5 * g.dx * minmod(d2xc, d2xp);
            const double d2yc = (w(i, j + 1) - 2.0 * w(i, j) + w(i, j - 1)) / dy2;
            const double d2ym = (w(i, j) - 2.0 * w(i, j - 1) + w(i, j - 2)) / dy2;
            const double d2yp = (w(i, j + 2) - 2.0 * w(i, j + 1) + w(i, j)) / dy2;
            const double uym = (w(i, j) - w(i, j - 1)) / g.dy + 0.5 * g.dy * minmod(d2yc, d2ym);
            const double uyp = (w(i, j + 1) - w(i, j)) / g.dy - 0.5 * g.dy * minmod(d2yc, d2yp);
            out(i, j) = w(i, j) - tau * h(g.x(i), g.y(j), uxm, uxp, uym, uyp);
        }
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

template <class Stage>
Field2D rk2_compose_2d(Stage&& s0, const Field2D& u, const BoundaryCondition2D& bc,
                       double t, double tau) {
    Field2D mid = s0(u, t);
    Field2D two = s0(mid, t + tau);
    Field2D out = u;
    for (int i = 0; i < u.nx(); ++i)
        for (int j = 0; j < u.ny(); ++j) out(i, j) = 0.5 * (u(i, j) + two(i, j));
    detail::pin_boundary(out, bc, t + tau);
    return out;
}

/// Clamp every node of u_new into the five-point stencil range of the
/// previous iterate.
inline Field2D limiter_clamp_2d(const Field2D& u_prev_ghosted, Field2D u_new) {
    for (int i = 0; i < u_new.nx(); ++i)
        for (int j = 0; j < u_new.ny(); ++j) {
            const double umin =
                std::min({u_prev_ghosted(i, j), u_prev_ghosted(i - 1, j), u_prev_ghosted(i + 1, j),
                          u_prev_ghosted(i, j - 1), u_prev_ghosted(i, j + 1)});
            const double umax =
                std::max({u_prev_ghosted(i, j), u_prev_ghosted(i - 1, j), u_prev_ghosted(i + 1, j),
                          u_prev_ghosted(i, j - 1), u_prev_ghosted(i, j + 1)});
            u_new(i, j) = std::clamp(u_new(i, j), umin, umax);
        }
    return u_new;
}

inline Field2D filtered_combine(const Field2D& sm, const Field2D& sa, FilterKind filter,
                                double eps, double tau, StepReport* report = nullptr) {
    if (!(eps > 0.0) || !(tau > 0.0))
        throw std::invalid_argument("filtered_combine: eps and tau must be positive");
    const double margin = eps * tau;
    Field2D out = sm;
    long inside = 0;
    double max_arg = 0.0;
    for (int i = 0; i < sm.nx(); ++i)
        for (int j = 0; j < sm.ny(); ++j) {
            const double d = sa(i, j) - sm(i, j);
            max_arg = std::max(max_arg, std::abs(d) / margin);
            if (std::abs(d) <= margin) {
                out(i, j) = sa(i, j);
                ++inside;
            } else if (filter == FilterKind::cutoff) {
                out(i, j) = sm(i, j);
            } else {
                out(i, j) = sm(i, j) + margin * filter_eval(filter, d / margin);
            }
        }
    if (report) {
        report->high_order_fraction =
            static_cast<double>(inside) / (static_cast<double>(sm.nx()) * sm.ny());
        report->max_filter_argument = max_arg;
    }
    return out;
}

struct FilteredStep2D {
    NumHamiltonian2D h_monotone;
    Hamiltonian2D H;
    HighOrderKind high_order = HighOrderKind::centered;
    BoundaryCondition2D bc;
    FilterKind filter = FilterKind::cutoff;
    double eps = 0.0;
    double tau = 0.0;
    bool clamp_limiter = false;

    Field2D operator()(const Field2D& u, double t, StepReport& report) const {
        Field2D sm = monotone_euler_step_2d(u, h_monotone, bc, t, tau);
        auto stage = [this](const Field2D& v, double ts) {
            return high_order == HighOrderKind::centered
                       ? centered_euler_step_2d(v, H, bc, ts, tau)
                       : eno2_euler_step_2d(v, h_monotone, bc, ts, tau);
        };
        Field2D sa = rk2_compose_2d(stage, u, bc, t, tau);
        if (clamp_limiter) {
            Field2D w = u;
            fill_ghosts(w, bc, t);
            sa = limiter_clamp_2d(w, std::move(sa));
        }
        return filtered_combine(sm, sa, filter, eps, tau, &report);
    }
};

struct PlainStep2D {
    enum class Kind { monotone, centered, eno2 };

    Kind kind = Kind::monotone;
    NumHamiltonian2D h_monotone;
    Hamiltonian2D H;
    BoundaryCondition2D bc;
    double tau = 0.0;

    Field2D operator()(const Field2D& u, double t, StepReport&) const {
        switch (kind) {
        case Kind::monotone:
            return monotone_euler_step_2d(u, h_monotone, bc, t, tau);
        case Kind::centered: {
            auto stage = [this](const Field2D& v, double ts) {
                return centered_euler_step_2d(v, H, bc, ts, tau);
            };
            return rk2_compose_2d(stage, u, bc, t, tau);
        }
        case Kind::eno2:
        default: {
            auto stage = [this](const Field2D& v, double ts) {
                return eno2_euler_step_2d(v, h_monotone, bc, ts, tau);
            };
            return rk2_compose_2d(stage, u, bc, t, tau);
        }
        }
    }
};

} // namespace hj
