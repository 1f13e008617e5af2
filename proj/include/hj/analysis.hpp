#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hj/march.hpp"
#include "hj/problems.hpp"
#include "hj/scheme1d.hpp"
#include "hj/scheme2d.hpp"

namespace hj {

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    std::string mask_description = "all nodes";

    double pick(NormKind k) const {
        switch (k) {
        case NormKind::l1: return l1;
        case NormKind::l2: return l2;
        case NormKind::linf:
        default: return linf;
        }
    }
};

/// Mesh-weighted norms of u - exact over the masked physical nodes:
/// l1 = dx*sum|e|, l2 = sqrt(dx*sum e^2), linf = max|e|.
inline ErrorNorms error_norms(const Field1D& u, const std::function<double(double)>& exact,
                              const std::function<bool(double)>& mask, double dx) {
    ErrorNorms n;
    long counted = 0;
    for (int j = 0; j < u.size(); ++j) {
        const double x = u.x(j);
        if (mask && !mask(x)) continue;
        const double e = std::abs(u(j) - exact(x));
        n.l1 += e;
        n.l2 += e * e;
        n.linf = std::max(n.linf, e);
        ++counted;
    }
    if (counted == 0) throw std::invalid_argument("error_norms: empty mask");
    n.l1 *= dx;
    n.l2 = std::sqrt(dx * n.l2);
    if (mask) n.mask_description = "masked nodes";
    return n;
}

inline ErrorNorms error_norms(const Field2D& u,
                              const std::function<double(double, double)>& exact) {
    const Grid2D& g = u.grid();
    ErrorNorms n;
    for (int i = 0; i < u.nx(); ++i)
        for (int j = 0; j < u.ny(); ++j) {
            const double e = std::abs(u(i, j) - exact(g.x(i), g.y(j)));
            n.l1 += e;
            n.l2 += e * e;
            n.linf = std::max(n.linf, e);
        }
    const double w = g.dx * g.dy;
    n.l1 *= w;
    n.l2 = std::sqrt(w * n.l2);
    return n;
}

/// log2 of the error ratio under mesh halving. Returns nothing when either
/// error is missing or nonpositive (divergent rows).
inline std::optional<double> convergence_order(double coarse_error, double fine_error) {
    if (!std::isfinite(coarse_error) || !std::isfinite(fine_error)) return std::nullopt;
    if (!(coarse_error > 0.0) || !(fine_error > 0.0)) return std::nullopt;
    return std::log2(coarse_error / fine_error);
}

struct ConvergenceRow {
    int m = 0;
    long n = 0;              // time steps, or fixed-point iterations when steady
    double error = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> order;
    ErrorNorms norms;
    bool diverged = false;
};

// ---------------------------------------------------------------------------
// Assembling a one-step operator for a benchmark problem
// ---------------------------------------------------------------------------

enum class SchemeVariant { monotone, centered, eno2, filtered_centered, filtered_eno2, sl };

inline SchemeVariant scheme_variant_from_name(const std::string& name) {
    if (name == "monotone") return SchemeVariant::monotone;
    if (name == "centered") return SchemeVariant::centered;
    if (name == "eno2") return SchemeVariant::eno2;
    if (name == "filtered-centered" || name == "filtered")
        return SchemeVariant::filtered_centered;
    if (name == "filtered-eno2") return SchemeVariant::filtered_eno2;
    if (name == "sl") return SchemeVariant::sl;
    throw std::invalid_argument("unknown scheme: " + name);
}

inline std::string scheme_variant_name(SchemeVariant v) {
    switch (v) {
    case SchemeVariant::monotone: return "monotone";
    case SchemeVariant::centered: return "centered";
    case SchemeVariant::eno2: return "eno2";
    case SchemeVariant::filtered_centered: return "filtered-centered";
    case SchemeVariant::filtered_eno2: return "filtered-eno2";
    case SchemeVariant::sl:
    default: return "sl";
    }
}

/// Per-run overrides on top of a problem's defaults.
struct RunOptions {
    SchemeVariant variant = SchemeVariant::filtered_centered;
    FilterKind filter = FilterKind::cutoff;
    std::optional<double> eps_c1;
    std::optional<bool> limiter;
    std::optional<double> cfl;
};

using StepFn1D = std::function<Field1D(const Field1D&, double, StepReport&)>;
using StepFn2D = std::function<Field2D(const Field2D&, double, StepReport&)>;

inline std::vector<double> sample_obstacle(const Problem1D& p, const Grid1D& grid) {
    std::vector<double> g;
    if (!p.obstacle) return g;
    const int n = p.bc.node_count(grid);
    g.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) g[static_cast<size_t>(j)] = (*p.obstacle)(grid.x(j));
    return g;
}

inline StepFn1D make_step_1d(const Problem1D& p, const Grid1D& grid, double tau,
                             const RunOptions& opt) {
    auto obstacle = sample_obstacle(p, grid);
    switch (opt.variant) {
    case SchemeVariant::filtered_centered:
    case SchemeVariant::filtered_eno2: {
        FilteredStep1D s;
        s.h_monotone = p.h_monotone;
        s.H = p.H;
        s.high_order = opt.variant == SchemeVariant::filtered_centered ? HighOrderKind::centered
                                                                       : HighOrderKind::eno2;
        s.bc = p.bc;
        s.filter = opt.filter;
        s.eps = compute_epsilon(EpsilonRule::linear(opt.eps_c1.value_or(p.eps_c1)), grid.dx);
        s.tau = tau;
        s.limiter = opt.limiter.value_or(p.limiter_default);
        s.limiter_trigger = p.limiter_trigger;
        s.obstacle = std::move(obstacle);
        return s;
    }
    case SchemeVariant::sl: {
        if (!p.sl)
            throw std::invalid_argument("problem " + p.id + " has no controlled dynamics");
        PlainStep1D s;
        s.kind = PlainStep1D::Kind::sl;
        s.sl = *p.sl;
        s.bc = p.bc;
        s.tau = tau;
        s.obstacle = std::move(obstacle);
        return s;
    }
    default: {
        PlainStep1D s;
        s.kind = opt.variant == SchemeVariant::monotone   ? PlainStep1D::Kind::monotone
                 : opt.variant == SchemeVariant::centered ? PlainStep1D::Kind::centered
                                                          : PlainStep1D::Kind::eno2;
        s.h_monotone = p.h_monotone;
        s.H = p.H;
        s.bc = p.bc;
        s.tau = tau;
        s.obstacle = std::move(obstacle);
        return s;
    }
    }
}

inline StepFn2D make_step_2d(const Problem2D& p, const Grid2D& grid, double tau,
                             const RunOptions& opt) {
    switch (opt.variant) {
    case SchemeVariant::filtered_centered:
    case SchemeVariant::filtered_eno2: {
        FilteredStep2D s;
        s.h_monotone = p.h_monotone;
        s.H = p.H;
        s.high_order = opt.variant == SchemeVariant::filtered_centered ? HighOrderKind::centered
                                                                       : HighOrderKind::eno2;
        s.bc = p.bc;
        s.filter = opt.filter;
        s.eps = compute_epsilon(EpsilonRule::linear(opt.eps_c1.value_or(p.eps_c1)), grid.dx);
        s.tau = tau;
        s.clamp_limiter = opt.limiter.value_or(p.limiter_default);
        return s;
    }
    case SchemeVariant::monotone:
    case SchemeVariant::centered:
    case SchemeVariant::eno2: {
        PlainStep2D s;
        s.kind = opt.variant == SchemeVariant::monotone   ? PlainStep2D::Kind::monotone
                 : opt.variant == SchemeVariant::centered ? PlainStep2D::Kind::centered
                                                          : PlainStep2D::Kind::eno2;
        s.h_monotone = p.h_monotone;
        s.H = p.H;
        s.bc = p.bc;
        s.tau = tau;
        return s;
    }
    default:
        throw std::invalid_argument("scheme not available in 2D");
    }
}

// ---------------------------------------------------------------------------
// Refinement studies
// ---------------------------------------------------------------------------

struct LevelOutcome1D {
    int m = 0;
    long n = 0;
    double tau = 0.0;
    bool diverged = false;
    ErrorNorms norms;
    Field1D u;
    SteadyStatus steady_status = SteadyStatus::converged;
    double steady_residual = 0.0;
};

inline std::function<bool(double)> error_mask_for(const Problem1D& p, double /*dx*/) {
    if (p.singular_points.empty()) return {};
    const double guard = p.mask_radius;
    auto pts = p.singular_points;
    return [pts, guard](double x) {
        for (double s : pts)
            if (std::abs(x - s) < guard) return false;
        return true;
    };
}

inline LevelOutcome1D run_level_1d(const Problem1D& p, int m, const RunOptions& opt) {
    LevelOutcome1D out;
    out.m = m;
    const Grid1D grid = Grid1D::make(p.xmin, p.xmax, m);
    const double tau_max = tau_from_cfl(grid, opt.cfl.value_or(p.cfl), p.c0);
    Field1D u0 = Field1D::sample(grid, p.bc, p.v0);
    double t_eval = 0.0;

    if (p.steady) {
        out.tau = tau_max;
        auto step = make_step_1d(p, grid, tau_max, opt);
        auto res = steady_solve(step, std::move(u0), tau_max, p.steady_tol, p.steady_max_iters);
        out.n = res.iterations;
        out.diverged = res.status == SteadyStatus::diverged;
        out.steady_status = res.status;
        out.steady_residual = res.residual;
        out.u = std::move(res.u);
    } else if (p.tfinal <= 0.0) {
        out.u = std::move(u0); // zero-length run: report the sampled data
    } else {
        const TimeGrid tg = TimeGrid::cover(p.tfinal, tau_max);
        out.tau = tg.tau;
        out.n = tg.steps;
        auto step = make_step_1d(p, grid, tg.tau, opt);
        auto res = march(step, std::move(u0), tg);
        out.diverged = res.diverged;
        out.u = std::move(res.u);
        t_eval = p.tfinal;
    }

    if (out.diverged) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.norms = {nan, nan, nan, "diverged"};
    } else {
        auto exact_here = [&p, t_eval](double x) { return p.exact(t_eval, x); };
        out.norms = error_norms(out.u, exact_here, error_mask_for(p, grid.dx), grid.dx);
    }
    return out;
}

struct LevelOutcome2D {
    int m = 0;
    long n = 0;
    double tau = 0.0;
    bool diverged = false;
    ErrorNorms norms;
    Field2D u;
};

inline LevelOutcome2D run_level_2d(const Problem2D& p, int m, const RunOptions& opt) {
    LevelOutcome2D out;
    out.m = m;
    const Grid2D grid = Grid2D::make(p.xmin, p.xmax, m, p.ymin, p.ymax, m);
    Field2D u0 = Field2D::sample(grid, p.bc, p.v0);
    if (p.tfinal <= 0.0) {
        out.u = std::move(u0);
    } else {
        const double tau_max = tau_from_cfl_2d(grid, opt.cfl.value_or(p.cfl), p.c0);
        const TimeGrid tg = TimeGrid::cover(p.tfinal, tau_max);
        out.tau = tg.tau;
        out.n = tg.steps;
        auto step = make_step_2d(p, grid, tg.tau, opt);
        auto res = march(step, std::move(u0), tg);
        out.diverged = res.diverged;
        out.u = std::move(res.u);
    }

    if (out.diverged) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.norms = {nan, nan, nan, "diverged"};
    } else {
        auto exact_here = [&p](double x, double y) { return p.exact(p.tfinal, x, y); };
        out.norms = error_norms(out.u, exact_here);
    }
    return out;
}

namespace detail {
inline void check_levels(const std::vector<int>& levels) {
    if (levels.empty()) throw std::invalid_argument("refinement_study: empty level list");
    for (size_t k = 1; k < levels.size(); ++k)
        if (levels[k] != 2 * levels[k - 1])
            throw std::invalid_argument("refinement_study: each level must double the previous");
}
} // namespace detail

/// Run one scheme over a doubling sequence of mesh sizes and attach the
/// observed orders. Divergent levels yield NaN rows; the study continues.
inline std::vector<ConvergenceRow> refinement_study_1d(const Problem1D& p,
                                                       const RunOptions& opt,
                                                       const std::vector<int>& levels) {
    detail::check_levels(levels);
    std::vector<ConvergenceRow> rows;
    for (int m : levels) {
        auto lvl = run_level_1d(p, m, opt);
        ConvergenceRow row;
        row.m = m;
        row.n = lvl.n;
        row.norms = lvl.norms;
        row.error = lvl.norms.pick(p.table_norm);
        row.diverged = lvl.diverged;
        if (!rows.empty()) row.order = convergence_order(rows.back().error, row.error);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<ConvergenceRow> refinement_study_2d(const Problem2D& p,
                                                       const RunOptions& opt,
                                                       const std::vector<int>& levels) {
    detail::check_levels(levels);
    std::vector<ConvergenceRow> rows;
    for (int m : levels) {
        auto lvl = run_level_2d(p, m, opt);
        ConvergenceRow row;
        row.m = m;
        row.n = lvl.n;
        row.norms = lvl.norms;
        row.error = lvl.norms.pick(p.table_norm);
        row.diverged = lvl.diverged;
        if (!rows.empty()) row.order = convergence_order(rows.back().error, row.error);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Empirical consistency probe
// ---------------------------------------------------------------------------

struct ProbeResult {
    double spatial_order = 0.0;
    double temporal_order = 0.0;
    double spatial_r2 = 0.0;
    double temporal_r2 = 0.0;
    std::vector<double> spatial_errors;
    std::vector<double> temporal_errors;
};

enum class ProbeScheme { monotone, centered_rk2, eno2_rk2 };

namespace detail {

struct FitResult {
    double slope = 0.0;
    double r2 = 0.0;
};

inline FitResult fit_loglog(const std::vector<double>& h, const std::vector<double>& e) {
    const size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t k = 0; k < n; ++k) {
        const double x = std::log2(h[k]);
        const double y = std::log2(e[k]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    FitResult f;
    f.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (size_t k = 0; k < n; ++k) {
        const double x = std::log2(h[k]);
        const double y = std::log2(e[k]);
        const double yhat = f.slope * x + intercept;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ymean) * (y - ymean);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// Largest one-step consistency defect over the probe window,
///   max_j |(v(t+tau, x_j) - S(v(t,.))_j)/tau - (v_t + H)(t, x_j)|.
inline double one_step_defect(ProbeScheme scheme, const NumHamiltonian1D& h,
                              const Hamiltonian1D& H,
                              const std::function<double(double, double)>& v,
                              const std::function<double(double, double)>& lhs,
                              double t, double xlo, double xhi, int m, double tau) {
    const Grid1D grid = Grid1D::make(xlo - 0.35 * (xhi - xlo), xhi + 0.35 * (xhi - xlo), m);
    auto bc = BoundaryCondition1D::dirichlet([&v](double tt, double x) { return v(tt, x); });
    Field1D u = Field1D::sample(grid, bc, [&v, t](double x) { return v(t, x); });

    Field1D stepped;
    switch (scheme) {
    case ProbeScheme::monotone:
        stepped = monotone_euler_step_1d(u, h, bc, t, tau);
        break;
    case ProbeScheme::centered_rk2: {
        auto stage = [&](const Field1D& w, double ts) {
            return centered_euler_step_1d(w, H, bc, ts, tau);
        };
        stepped = rk2_compose_1d(stage, u, bc, t, tau);
        break;
    }
    case ProbeScheme::eno2_rk2:
    default: {
        auto stage = [&](const Field1D& w, double ts) {
            return eno2_euler_step_1d(w, h, bc, ts, tau);
        };
        stepped = rk2_compose_1d(stage, u, bc, t, tau);
        break;
    }
    }

    double worst = 0.0;
    for (int j = 0; j < stepped.size(); ++j) {
        const double x = stepped.x(j);
        if (x < xlo || x > xhi) continue;
        const double defect = (v(t + tau, x) - stepped(j)) / tau - lhs(t, x);
        worst = std::max(worst, std::abs(defect));
    }
    return worst;
}

} // namespace detail

/// Fit the one-step consistency defect against mesh size along two sweeps:
/// tau ~ dx^2 isolates the spatial order, tau ~ dx gives the coupled
/// (temporal, with our schemes) order. Smooth test data must keep v_x away
/// from kinks of the flux over [xlo, xhi].
inline ProbeResult consistency_probe(ProbeScheme scheme, const NumHamiltonian1D& h,
                                     const Hamiltonian1D& H,
                                     const std::function<double(double, double)>& v,
                                     const std::function<double(double, double)>& lhs,
                                     double t = 0.2, double xlo = 0.3, double xhi = 1.0,
                                     int levels = 5) {
    if (levels < 4) throw std::invalid_argument("consistency_probe: need >= 4 levels");
    ProbeResult res;
    std::vector<double> hs;
    for (int k = 0; k < levels; ++k) {
        const int m = 40 << k;
        const double dx = 1.7 * (xhi - xlo) / m;
        hs.push_back(dx);
        res.spatial_errors.push_back(
            detail::one_step_defect(scheme, h, H, v, lhs, t, xlo, xhi, m, 0.2 * dx * dx));
        res.temporal_errors.push_back(
            detail::one_step_defect(scheme, h, H, v, lhs, t, xlo, xhi, m, 0.5 * dx));
    }
    const auto fs = detail::fit_loglog(hs, res.spatial_errors);
    const auto ft = detail::fit_loglog(hs, res.temporal_errors);
    res.spatial_order = fs.slope;
    res.spatial_r2 = fs.r2;
    res.temporal_order = ft.slope;
    res.temporal_r2 = ft.r2;
    return res;
}

} // namespace hj
