#pragma once

#include <algorithm>
#include <cmath>

#include "hj/field.hpp"
#include "hj/grid.hpp"

namespace hj {

/// Per-step diagnostics of a filtered update.
struct StepReport {
    /// Fraction of nodes where the high-order and monotone predictions
    /// stayed within the eps*tau switching margin.
    double high_order_fraction = 0.0;
    /// Largest |S_A - S_M| / (eps*tau) seen over the nodes.
    double max_filter_argument = 0.0;
};

template <class FieldT>
struct MarchResult {
    FieldT u;
    int steps_taken = 0;
    bool diverged = false;
    StepReport last_report;
};

/// Advance u0 through the whole time grid with a one-step operator
/// step(u, t, report) -> field. Stops early and flags divergence as soon
/// as a non-finite value appears.
template <class FieldT, class Step>
MarchResult<FieldT> march(Step&& step, FieldT u0, const TimeGrid& tg) {
    MarchResult<FieldT> res{std::move(u0), 0, false, {}};
    for (int n = 0; n < tg.steps; ++n) {
        res.u = step(res.u, tg.t(n), res.last_report);
        ++res.steps_taken;
        if (!res.u.all_finite()) {
            res.diverged = true;
            return res;
        }
    }
    return res;
}

inline double sup_diff(const Field1D& a, const Field1D& b) {
    double s = 0.0;
    for (int j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a(j) - b(j)));
    return s;
}

inline double sup_diff(const Field2D& a, const Field2D& b) {
    double s = 0.0;
    for (int i = 0; i < a.nx(); ++i)
        for (int j = 0; j < a.ny(); ++j) s = std::max(s, std::abs(a(i, j) - b(i, j)));
    return s;
}

enum class SteadyStatus { converged, iteration_limit, diverged };

template <class FieldT>
struct SteadyResult {
    FieldT u;
    int iterations = 0;
    double residual = 0.0;
    SteadyStatus status = SteadyStatus::iteration_limit;
};

/// Fixed-point iteration of a one-step operator until the sup-norm of the
/// update drops below tol, or max_iters is reached. Non-finite iterates are
/// reported as divergence, distinct from plain non-convergence.
template <class FieldT, class Step>
SteadyResult<FieldT> steady_solve(Step&& step, FieldT u0, double tau, double tol,
                                  int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("steady_solve: tol must be positive");
    SteadyResult<FieldT> res{std::move(u0), 0, 0.0, SteadyStatus::iteration_limit};
    StepReport rep;
    for (int n = 0; n < max_iters; ++n) {
        FieldT next = step(res.u, n * tau, rep);
        ++res.iterations;
        if (!next.all_finite()) {
            res.u = std::move(next);
            res.status = SteadyStatus::diverged;
            return res;
        }
        res.residual = sup_diff(next, res.u);
        res.u = std::move(next);
        if (res.residual <= tol) {
            res.status = SteadyStatus::converged;
            return res;
        }
    }
    return res;
}

} // namespace hj
