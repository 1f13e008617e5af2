#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hj {

/// Bounded filter shapes. Both are odd, vanish at 0 and satisfy |F| <= 1;
/// both equal the identity on [-1, 1] (endpoints included).
///
///   cutoff:          F(s) = s for |s| <= 1, 0 otherwise
///   froese_oberman:  F(s) = sign(s) * max(1 - ||s| - 1|, 0)
///
/// The cutoff filter drops discontinuously to zero outside [-1, 1]; the
/// Froese-Oberman shape decays linearly to zero on 1 <= |s| <= 2.
enum class FilterKind { cutoff, froese_oberman };

inline double filter_eval(FilterKind kind, double s) {
    switch (kind) {
    case FilterKind::cutoff:
        return std::abs(s) <= 1.0 ? s : 0.0;
    case FilterKind::froese_oberman:
    default: {
        const double mag = std::max(1.0 - std::abs(std::abs(s) - 1.0), 0.0);
        return s >= 0.0 ? mag : -mag;
    }
    }
}

/// Rule producing the switching threshold epsilon from the mesh size.
///
/// linear:  eps = c1 * dx       (c1 ~ 5 in 1D, ~ 20 in 2D)
/// capped:  eps = min(c1 * dx, cap_c0 * sqrt(dx)), keeping eps below the
///          sqrt(dx) ceiling required for the convergence estimate.
struct EpsilonRule {
    enum class Mode { linear, capped };

    double c1 = 5.0;
    double cap_c0 = 1.0;
    Mode mode = Mode::linear;

    static EpsilonRule linear(double c1) { return {c1, 1.0, Mode::linear}; }
    static EpsilonRule capped(double c1, double cap_c0) { return {c1, cap_c0, Mode::capped}; }
};

inline double compute_epsilon(const EpsilonRule& rule, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("compute_epsilon: dx must be positive");
    const double lin = rule.c1 * dx;
    if (rule.mode == EpsilonRule::Mode::linear) return lin;
    return std::min(lin, rule.cap_c0 * std::sqrt(dx));
}

/// Advisory lower bound for the linear coefficient c1: half the curvature
/// bound of the solution times the spread of the flux partials.
inline double estimate_switching_constant(double vxx_bound, double dh_spread) {
    return 0.5 * vxx_bound * dh_spread;
}

} // namespace hj
