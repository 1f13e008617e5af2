#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hj/field.hpp"
#include "hj/grid.hpp"
#include "hj/hamiltonian.hpp"
#include "hj/scheme1d.hpp"

namespace hj {

enum class NormKind { l1, l2, linf };

/// Benchmark descriptor for a one-dimensional equation
/// v_t + H(x, v_x) = 0 (or its steady fixed point), with optional obstacle
/// constraint v >= g.
struct Problem1D {
    std::string id;
    std::string title;

    double xmin = 0.0, xmax = 1.0;
    BoundaryCondition1D bc;
    std::function<double(double)> v0;
    std::function<double(double, double)> exact; // (t, x)

    Hamiltonian1D H;
    NumHamiltonian1D h_monotone;

    double cfl = 0.37;   // Courant number for tau = cfl*dx/c0
    double c0 = 1.0;     // speed bound entering the stability constraint
    double eps_c1 = 5.0; // switching threshold eps = c1*dx
    double tfinal = 0.0; // unused when steady

    bool steady = false;
    double steady_tol = 1e-6;
    int steady_max_iters = 5000;

    bool limiter_default = false;
    // limit wherever the propagation speed can change sign; empty predicate
    // means "everywhere"
    std::function<bool(double)> limiter_trigger;

    std::optional<std::function<double(double)>> obstacle;

    std::optional<SlDynamics1D> sl;

    NormKind table_norm = NormKind::l2;
    std::vector<double> singular_points; // excluded from the error norm
    double mask_radius = 0.1;            // exclusion radius around each point

    std::vector<int> default_levels;
    std::vector<std::string> default_schemes;
};

/// Same for two dimensions. No obstacle or extrema limiter here; the 2D
/// limiter is the five-point clamp.
struct Problem2D {
    std::string id;
    std::string title;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    BoundaryCondition2D bc;
    std::function<double(double, double)> v0;
    std::function<double(double, double, double)> exact; // (t, x, y)

    Hamiltonian2D H;
    NumHamiltonian2D h_monotone;

    double cfl = 0.37;
    double c0 = 1.0;
    double eps_c1 = 20.0;
    double tfinal = 0.0;

    bool limiter_default = false; // five-point clamp on the high-order step

    NormKind table_norm = NormKind::l2;
    std::vector<int> default_levels;
    std::vector<std::string> default_schemes;
};

namespace detail {

inline double quartic_bump(double rsq) {
    const double s = 1.0 - rsq;
    return s > 0.0 ? s * s * s * s : 0.0;
}

/// Separation point and linear coefficient of the steady benchmark.
struct SteadyEikonalData {
    double x0;
    double a;
};

inline SteadyEikonalData steady_eikonal_data() {
    const double c = std::cbrt(2.0);
    const double x0 = (c + 2.0) / (4.0 * c);
    const double a = (1.0 - 2.0 * x0 * x0 * x0) / (2.0 * x0 - 1.0);
    return {x0, a};
}

inline double wrap_into(double x, double lo, double period) {
    double r = std::fmod(x - lo, period);
    if (r < 0.0) r += period;
    return lo + r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Example 1: v_t + |v_x| = 0 on (-2,2), quartic hump data.
// ---------------------------------------------------------------------------

inline Problem1D example1_eikonal(bool reversed) {
    Problem1D p;
    p.id = reversed ? "ex1b" : "ex1a";
    p.title = reversed ? "1D eikonal, reversed hump" : "1D eikonal, hump";
    p.xmin = -2.0;
    p.xmax = 2.0;
    p.bc = BoundaryCondition1D::dirichlet(0.0);
    p.tfinal = 0.3;
    p.cfl = 0.37;
    p.c0 = 1.0;
    p.eps_c1 = 5.0;
    p.table_norm = NormKind::l2;
    p.limiter_default = true; // both data variants benefit near the extremum
    p.limiter_trigger = {};   // speeds of |p| change sign everywhere
    p.default_levels = {40, 80, 160, 320, 640};
    p.default_schemes = {"filtered-centered", "centered", "eno2"};

    const double sign = reversed ? -1.0 : 1.0;
    p.v0 = [sign](double x) { return sign * detail::quartic_bump(x * x); };
    if (!reversed) {
        // fronts expand: the running minimum over [x-t, x+t] of a hump
        // centered at 0 sits at the endpoint farthest from the peak
        p.exact = [](double t, double x) {
            const double r = std::abs(x) + t;
            return detail::quartic_bump(r * r);
        };
    } else {
        // for the downward hump the minimum sits at the point of the
        // interval closest to 0
        p.exact = [](double t, double x) {
            const double r = std::max(0.0, std::abs(x) - t);
            return -detail::quartic_bump(r * r);
        };
    }

    p.H = [](double, double q) { return std::abs(q); };
    p.h_monotone = h_upwind_eikonal;

    SlDynamics1D sl;
    for (int k = 0; k <= 10; ++k) sl.controls_a.push_back(-1.0 + 0.2 * k);
    sl.controls_b = {0.0};
    sl.f = [](double, double a, double) { return a; };
    sl.ell = [](double, double, double) { return 0.0; };
    p.sl = sl;
    return p;
}

// ---------------------------------------------------------------------------
// Example 2: v_t + v_x^2/2 = 0 on (-2,2), data advanced to t0 = 0.1.
// ---------------------------------------------------------------------------

namespace detail {
/// Value of the parabolic-hump solution of v_t + v_x^2/2 = 0 with
/// v(0,x) = max(0, 1-x^2), valid for 0 < s < 1/2; obtained by minimizing
/// v0(y) + (x-y)^2/(2s) over y.
inline double burgers_hump(double s, double x) {
    const double ax = std::abs(x);
    if (ax >= 1.0) return 0.0;
    const double r = 1.0 - 2.0 * s;
    if (ax >= r) {
        const double d = 1.0 - ax;
        return 0.5 * d * d / s;
    }
    return 1.0 - x * x / r;
}
} // namespace detail

inline Problem1D example2_burgers() {
    Problem1D p;
    p.id = "ex2";
    p.title = "1D Burgers-type, shifted smooth hump";
    p.xmin = -2.0;
    p.xmax = 2.0;
    p.bc = BoundaryCondition1D::dirichlet(0.0);
    p.tfinal = 0.3;
    p.cfl = 0.37;
    p.c0 = 1.0;
    p.eps_c1 = 5.0;
    p.table_norm = NormKind::l2;
    p.default_levels = {40, 80, 160, 320, 640};
    p.default_schemes = {"filtered-centered", "centered", "eno2"};

    constexpr double t0 = 0.1;
    p.v0 = [](double x) { return detail::burgers_hump(t0, x); };
    p.exact = [](double t, double x) { return detail::burgers_hump(t + t0, x); };

    p.H = [](double, double q) { return 0.5 * q * q; };
    p.h_monotone = h_upwind_burgers;

    SlDynamics1D sl;
    for (int k = 0; k <= 20; ++k) sl.controls_a.push_back(-2.0 + 0.2 * k);
    sl.controls_b = {0.0};
    sl.f = [](double, double a, double) { return -a; };
    sl.ell = [](double, double a, double) { return 0.5 * a * a; };
    p.sl = sl;
    return p;
}

// ---------------------------------------------------------------------------
// Example 3: rigid rotation v_t - y v_x + x v_y = 0 on (-2.5, 2.5)^2.
// ---------------------------------------------------------------------------

inline Problem2D example3_rotation() {
    Problem2D p;
    p.id = "ex3";
    p.title = "2D rotation of a smooth crater";
    p.xmin = p.ymin = -2.5;
    p.xmax = p.ymax = 2.5;
    p.bc = BoundaryCondition2D::dirichlet(0.5);
    p.tfinal = std::numbers::pi / 2.0;
    p.cfl = 0.37;
    p.c0 = 2.5;
    p.eps_c1 = 20.0;
    p.table_norm = NormKind::l2;
    p.default_levels = {20, 40, 80, 160, 320};
    p.default_schemes = {"filtered-centered", "centered", "eno2"};

    constexpr double r0sq = 0.25;
    auto crater = [](double x, double y) {
        const double s = (1.0 - (x - 1.0) * (x - 1.0) - y * y) / (1.0 - r0sq);
        const double c = std::max(0.0, s);
        return 0.5 - 0.5 * c * c * c * c;
    };
    p.v0 = crater;
    p.exact = [crater](double t, double x, double y) {
        // transport along the rotation flow: undo the rotation by angle t
        const double ct = std::cos(t), st = std::sin(t);
        return crater(ct * x + st * y, -st * x + ct * y);
    };

    p.H = [](double x, double y, double px, double py) { return -y * px + x * py; };
    p.h_monotone = h_upwind_advection_2d([](double, double y) { return -y; },
                                         [](double x, double) { return x; });
    return p;
}

// ---------------------------------------------------------------------------
// Example 4: v_t + |grad v| = 0 on (-3,3)^2, two craters.
// ---------------------------------------------------------------------------

inline Problem2D example4_eikonal2d() {
    Problem2D p;
    p.id = "ex4";
    p.title = "2D eikonal, two expanding craters";
    p.xmin = p.ymin = -3.0;
    p.xmax = p.ymax = 3.0;
    p.bc = BoundaryCondition2D::dirichlet(0.5);
    p.tfinal = 0.6;
    p.cfl = 0.37;
    p.c0 = 1.0;
    p.eps_c1 = 20.0;
    p.table_norm = NormKind::l2;
    p.limiter_default = true; // five-point clamp on the high-order step
    p.default_levels = {25, 50, 100, 200, 400};
    p.default_schemes = {"filtered-centered", "centered", "eno2"};

    constexpr double r0sq = 0.25;
    // radial profile of one crater as a function of distance to its center
    auto profile = [](double rho) {
        const double s = (1.0 - rho * rho) / (1.0 - r0sq);
        const double c = std::max(0.0, s);
        return c * c * c * c;
    };
    p.v0 = [profile](double x, double y) {
        const double da = std::hypot(x - 1.0, y);
        const double db = std::hypot(x + 1.0, y);
        return 0.5 - 0.5 * std::max(profile(da), profile(db));
    };
    p.exact = [profile](double t, double x, double y) {
        // min of v0 over the disc of radius t = max of each radial profile
        // at its closest approach to the respective center
        const double da = std::max(0.0, std::hypot(x - 1.0, y) - t);
        const double db = std::max(0.0, std::hypot(x + 1.0, y) - t);
        return 0.5 - 0.5 * std::max(profile(da), profile(db));
    };

    p.H = [](double, double, double px, double py) { return std::hypot(px, py); };
    p.h_monotone = h_lf_2d(p.H, 1.0, 1.0);
    return p;
}

// ---------------------------------------------------------------------------
// Example 5: steady |v_x| = f(x) on (0,1), marched in pseudo-time.
// ---------------------------------------------------------------------------

inline Problem1D example5_steady_eikonal() {
    Problem1D p;
    p.id = "ex5";
    p.title = "steady eikonal with source";
    p.xmin = 0.0;
    p.xmax = 1.0;
    p.bc = BoundaryCondition1D::dirichlet(0.0);
    p.steady = true;
    p.steady_tol = 1e-6;
    p.steady_max_iters = 5000;
    p.cfl = 0.5;
    p.c0 = 1.0;
    p.eps_c1 = 5.0;
    p.table_norm = NormKind::linf;
    p.limiter_trigger = {};
    p.default_levels = {50, 100, 200, 400, 800};
    p.default_schemes = {"filtered-centered", "centered", "filtered-eno2"};

    const auto data = detail::steady_eikonal_data();
    const double x0 = data.x0;
    const double a = data.a;
    auto source = [a](double x) { return 3.0 * x * x + a; };

    p.v0 = [](double) { return 0.0; };
    p.exact = [x0, a](double, double x) {
        if (x <= x0) return x * x * x + a * x;
        return 1.0 + a - a * x - x * x * x;
    };

    p.H = [source](double x, double q) { return std::abs(q) - source(x); };
    p.h_monotone = [source](double x, double um, double up) {
        return std::max(um, -up) - source(x);
    };

    SlDynamics1D sl;
    for (int k = 0; k <= 10; ++k) sl.controls_a.push_back(-1.0 + 0.2 * k);
    sl.controls_b = {0.0};
    sl.f = [](double, double aa, double) { return -aa; };
    sl.ell = [source](double x, double, double) { return source(x); };
    p.sl = sl;
    return p;
}

// ---------------------------------------------------------------------------
// Example 6: obstacle advection min(v_t + v_x, v - g) = 0, periodic.
// ---------------------------------------------------------------------------

inline Problem1D example6_obstacle_advection() {
    Problem1D p;
    p.id = "ex6";
    p.title = "advection with sine obstacle";
    p.xmin = -1.0;
    p.xmax = 1.0;
    p.bc = BoundaryCondition1D::periodic();
    p.tfinal = 0.5;
    p.cfl = 0.5;
    p.c0 = 1.0;
    p.eps_c1 = 5.0;
    p.table_norm = NormKind::linf;
    p.singular_points = {-0.1349733, 0.5, 2.0 / 3.0};
    p.mask_radius = 0.1;
    p.limiter_trigger = [](double) { return false; }; // constant positive speed
    p.default_levels = {40, 80, 160, 320, 640};
    p.default_schemes = {"filtered-centered", "centered", "eno2"};

    constexpr double pi = std::numbers::pi;
    auto v0 = [](double x) { return 0.5 + std::sin(pi * x); };
    auto g = [](double x) { return std::sin(pi * x); };
    p.v0 = v0;
    p.obstacle = g;
    // value transported at speed one, lifted by the obstacle along the way:
    // the crest of g (value 1 at x = 0.5) sweeps a trailing plateau
    p.exact = [v0, g](double t, double x) {
        double best = std::max(v0(x - t), g(x));
        const double behind = detail::wrap_into(x - 0.5, 0.0, 2.0);
        if (behind <= t) best = std::max(best, 1.0);
        return best;
    };

    p.H = [](double, double q) { return q; };
    p.h_monotone = [](double, double um, double) { return um; };

    SlDynamics1D sl;
    sl.controls_a = {0.0};
    sl.controls_b = {0.0};
    sl.f = [](double, double, double) { return -1.0; };
    sl.ell = [](double, double, double) { return 0.0; };
    p.sl = sl;
    return p;
}

// ---------------------------------------------------------------------------
// Example 7: obstacle eikonal min(v_t + |v_x|, v - g) = 0, periodic.
// ---------------------------------------------------------------------------

inline Problem1D example7_obstacle_eikonal() {
    Problem1D p;
    p.id = "ex7";
    p.title = "eikonal with sine obstacle";
    p.xmin = -1.0;
    p.xmax = 1.0;
    p.bc = BoundaryCondition1D::periodic();
    p.tfinal = 0.2;
    p.cfl = 0.5;
    p.c0 = 1.0;
    p.eps_c1 = 5.0;
    p.table_norm = NormKind::l2;
    p.limiter_default = true; // keeps the expanding trough from undershooting
    p.limiter_trigger = {};
    p.default_levels = {40, 80, 160, 320, 640};
    p.default_schemes = {"filtered-centered", "eno2"};

    constexpr double pi = std::numbers::pi;
    auto v0 = [](double x) { return 0.5 + std::sin(pi * x); };
    auto g = [](double x) { return std::sin(pi * x); };
    p.v0 = v0;
    p.obstacle = g;
    // running minimum of v0 over [x-t, x+t] (flat across the trough at
    // x = -1/2), cut from below by the obstacle
    p.exact = [v0, g](double t, double x) {
        double vbar;
        if (x < -0.5 - t)
            vbar = v0(x + t);
        else if (x <= -0.5 + t)
            vbar = -0.5;
        else
            vbar = std::min(v0(x - t), v0(x + t));
        return std::max(vbar, g(x));
    };

    p.H = [](double, double q) { return std::abs(q); };
    p.h_monotone = h_upwind_eikonal;

    SlDynamics1D sl;
    for (int k = 0; k <= 10; ++k) sl.controls_a.push_back(-1.0 + 0.2 * k);
    sl.controls_b = {0.0};
    sl.f = [](double, double a, double) { return a; };
    sl.ell = [](double, double, double) { return 0.0; };
    p.sl = sl;
    return p;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& problem_ids() {
    static const std::vector<std::string> ids = {"ex1a", "ex1b", "ex2", "ex3",
                                                 "ex4",  "ex5",  "ex6", "ex7"};
    return ids;
}

inline bool is_problem_2d(std::string_view id) { return id == "ex3" || id == "ex4"; }

inline Problem1D problem_1d(std::string_view id) {
    if (id == "ex1a") return example1_eikonal(false);
    if (id == "ex1b") return example1_eikonal(true);
    if (id == "ex2") return example2_burgers();
    if (id == "ex5") return example5_steady_eikonal();
    if (id == "ex6") return example6_obstacle_advection();
    if (id == "ex7") return example7_obstacle_eikonal();
    throw std::invalid_argument("unknown 1D problem id: " + std::string(id));
}

inline Problem2D problem_2d(std::string_view id) {
    if (id == "ex3") return example3_rotation();
    if (id == "ex4") return example4_eikonal2d();
    throw std::invalid_argument("unknown 2D problem id: " + std::string(id));
}

} // namespace hj
