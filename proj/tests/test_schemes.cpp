#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hj/analysis.hpp"
#include "hj/march.hpp"
#include "hj/problems.hpp"
#include "hj/scheme1d.hpp"
#include "hj/scheme2d.hpp"

using namespace hj;

namespace {

Field1D peak_field(const Grid1D& g, const BoundaryCondition1D& bc) {
    Field1D u(g, bc.node_count(g));
    for (int j = 0; j < u.size(); ++j) u(j) = 0.0;
    u(2) = 1.0;
    return u;
}

/// Smooth random periodic field with derivative bounded by ~2.
Field1D random_smooth_field(const Grid1D& g, std::mt19937& rng) {
    std::uniform_real_distribution<double> amp(-0.3, 0.3), phase(0.0, 6.28);
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
    const double w = 2.0 * std::numbers::pi / g.length();
    Field1D u(g, g.m);
    for (int j = 0; j < g.m; ++j) {
        const double x = g.x(j);
        u(j) = a1 * std::sin(w * x + p1) + a2 * std::sin(2 * w * x + p2)
               + a3 * std::sin(3 * w * x + p3);
    }
    return u;
}

double max_slope(const Field1D& u) {
    double s = 0.0;
    for (int j = 0; j < u.size() - 1; ++j)
        s = std::max(s, std::abs(u(j + 1) - u(j)) / u.dx());
    s = std::max(s, std::abs(u(0) - u(u.size() - 1)) / u.dx());
    return s;
}

} // namespace

TEST_CASE("monotone update at an isolated peak") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u = peak_field(g, bc); // [0 0 1 0]
    Field1D out = monotone_euler_step_1d(u, h_upwind_eikonal, bc, 0.0, 0.5);
    // at the peak both one-sided slopes push down: flux = max(1, 1) = 1
    CHECK(out(2) == 0.5);
    CHECK(out(1) == 0.0);
    CHECK(out(3) == 0.0);
}

TEST_CASE("constant data is steady for the eikonal flux") {
    auto g = Grid1D::make(0.0, 4.0, 8);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u(g, 8);
    for (int j = 0; j < 8; ++j) u(j) = 0.7;
    Field1D out = monotone_euler_step_1d(u, h_upwind_eikonal, bc, 0.0, 0.3);
    for (int j = 0; j < 8; ++j) CHECK(out(j) == 0.7);
}

TEST_CASE("affine data transports exactly") {
    const double s = -1.5;
    auto g = Grid1D::make(0.0, 4.0, 16);
    // boundary data follows the exact solution s*x - |s|*t
    auto bc = BoundaryCondition1D::dirichlet(
        [s](double t, double x) { return s * x - std::abs(s) * t; });
    Field1D u = Field1D::sample(g, bc, [s](double x) { return s * x; });
    const double tau = 0.1;
    SECTION("monotone upwind step") {
        Field1D out = monotone_euler_step_1d(u, h_upwind_eikonal, bc, 0.0, tau);
        for (int j = 0; j < out.size(); ++j)
            CHECK(out(j) == Catch::Approx(s * g.x(j) - std::abs(s) * tau).margin(1e-14));
    }
    SECTION("centered one-stage step") {
        Hamiltonian1D H = [](double, double p) { return std::abs(p); };
        Field1D out = centered_euler_step_1d(u, H, bc, 0.0, tau);
        for (int j = 0; j < out.size(); ++j)
            CHECK(out(j) == Catch::Approx(s * g.x(j) - std::abs(s) * tau).margin(1e-14));
    }
}

TEST_CASE("centered stage is blind to an isolated peak") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u = peak_field(g, bc);
    Hamiltonian1D H = [](double, double p) { return std::abs(p); };
    Field1D out = centered_euler_step_1d(u, H, bc, 0.0, 0.5);
    CHECK(out(2) == 1.0); // centered slope vanishes at the extremum
}

TEST_CASE("reconstruction stage matches exact derivatives on a parabola") {
    auto g = Grid1D::make(-1.0, 1.0, 16);
    auto exactfn = [](double, double x) { return x * x; };
    auto bc = BoundaryCondition1D::dirichlet(exactfn);
    Field1D u = Field1D::sample(g, bc, [](double x) { return x * x; });
    const double tau = 0.01;
    Field1D out = eno2_euler_step_1d(u, h_upwind_eikonal, bc, 0.0, tau);
    for (int j = 1; j < out.size() - 1; ++j) {
        const double p = 2.0 * g.x(j);
        CHECK(out(j) == Catch::Approx(u(j) - tau * std::max(p, -p)).margin(1e-13));
    }
}

TEST_CASE("two-stage composition algebra") {
    auto g = Grid1D::make(0.0, 4.0, 8);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u(g, 8);
    for (int j = 0; j < 8; ++j) u(j) = std::sin(1.7 * j);

    SECTION("identity stage is a fixed point") {
        auto s0 = [](const Field1D& v, double) { return v; };
        Field1D out = rk2_compose_1d(s0, u, bc, 0.0, 0.1);
        for (int j = 0; j < 8; ++j) CHECK(out(j) == u(j));
    }
    SECTION("linear contraction composes to (1 + a^2)/2") {
        const double a = 0.25;
        auto s0 = [a](const Field1D& v, double) {
            Field1D w = v;
            for (int j = 0; j < w.size(); ++j) w(j) = a * v(j);
            return w;
        };
        Field1D out = rk2_compose_1d(s0, u, bc, 0.0, 0.1);
        for (int j = 0; j < 8; ++j)
            CHECK(out(j) == Catch::Approx(0.5 * (1.0 + a * a) * u(j)).margin(1e-15));
    }
}

TEST_CASE("filter blend node cases") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    Field1D sm(g, 4), sa(g, 4);
    for (int j = 0; j < 4; ++j) sm(j) = 1.0;
    const double eps = 0.2, tau = 0.5; // margin = 0.1

    SECTION("identical predictions pass through") {
        sa = sm;
        Field1D out = filtered_combine(sm, sa, FilterKind::cutoff, eps, tau);
        for (int j = 0; j < 4; ++j) CHECK(out(j) == 1.0);
    }
    SECTION("difference inside the margin adopts the high-order value") {
        sa = sm;
        sa(1) = 1.0 + 0.05; // = eps*tau/2
        Field1D out = filtered_combine(sm, sa, FilterKind::cutoff, eps, tau);
        CHECK(out(1) == sa(1));
    }
    SECTION("difference beyond the margin falls back to the monotone value") {
        sa = sm;
        sa(1) = 1.0 + 0.2; // = 2*eps*tau
        Field1D out = filtered_combine(sm, sa, FilterKind::cutoff, eps, tau);
        CHECK(out(1) == 1.0);
    }
    SECTION("tent filter decays linearly in the outer band") {
        sa = sm;
        sa(1) = 1.0 + 0.15; // argument 1.5 -> F = 0.5
        Field1D out = filtered_combine(sm, sa, FilterKind::froese_oberman, eps, tau);
        CHECK(out(1) == Catch::Approx(1.0 + 0.1 * 0.5).margin(1e-15));
    }
    SECTION("step report counts the high-order fraction") {
        sa = sm;
        sa(0) = 1.0 + 0.05;
        sa(1) = 1.0 + 0.4;
        StepReport rep;
        filtered_combine(sm, sa, FilterKind::cutoff, eps, tau, &rep);
        CHECK(rep.high_order_fraction == Catch::Approx(0.75));
        CHECK(rep.max_filter_argument == Catch::Approx(4.0));
    }
}

TEST_CASE("extrema limiter on flux values") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    auto bc = BoundaryCondition1D::periodic();
    const double tau = 1.0;

    SECTION("flat data clamps any positive flux to zero") {
        Field1D u(g, 4);
        for (int j = 0; j < 4; ++j) u(j) = 0.0;
        fill_ghosts(u, bc, 0.0);
        std::vector<double> ha = {0.7, 0.7, 0.7, 0.7};
        auto lim = limiter_extrema_1d(u, ha, {}, tau);
        for (double v : lim) CHECK(v == 0.0);
    }
    SECTION("peak bounds the flux by the neighborhood range") {
        Field1D u = peak_field(g, bc);
        fill_ghosts(u, bc, 0.0);
        std::vector<double> ha = {0.0, 0.0, 2.0, 0.0};
        auto lim = limiter_extrema_1d(u, ha, {}, tau);
        CHECK(lim[2] == 1.0); // (u_j - min neighbors)/tau = 1
    }
    SECTION("untriggered nodes pass through") {
        Field1D u = peak_field(g, bc);
        fill_ghosts(u, bc, 0.0);
        std::vector<double> ha = {0.0, 0.0, 2.0, 0.0};
        auto lim = limiter_extrema_1d(u, ha, [](double) { return false; }, tau);
        CHECK(lim[2] == 2.0);
    }
}

TEST_CASE("limiting the flux equals clamping the step values") {
    std::mt19937 rng(31);
    auto g = Grid1D::make(-1.0, 1.0, 32);
    auto bc = BoundaryCondition1D::periodic();
    const double tau = 0.03;
    for (int trial = 0; trial < 20; ++trial) {
        Field1D u = random_smooth_field(g, rng);
        fill_ghosts(u, bc, 0.0);
        Field1D sa = random_smooth_field(g, rng);
        std::vector<double> ha(32);
        for (int j = 0; j < 32; ++j) ha[static_cast<size_t>(j)] = (u(j) - sa(j)) / tau;
        auto lim = limiter_extrema_1d(u, ha, {}, tau);
        Field1D clamped = clamp_extrema_1d(u, sa, {});
        for (int j = 0; j < 32; ++j)
            CHECK(clamped(j) ==
                  Catch::Approx(u(j) - tau * lim[static_cast<size_t>(j)]).margin(1e-12));
    }
}

TEST_CASE("five-point clamp") {
    auto g = Grid2D::make(0.0, 1.0, 4, 0.0, 1.0, 4);
    auto bc = BoundaryCondition2D::periodic();
    Field2D prev(g, 4, 4), next(g, 4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            prev(i, j) = 0.0;
            next(i, j) = 0.0;
        }
    fill_ghosts(prev, bc, 0.0);

    SECTION("values within range pass through") {
        Field2D out = limiter_clamp_2d(prev, next);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(out(i, j) == 0.0);
    }
    SECTION("an undershoot is pulled back to the stencil range") {
        next(2, 2) = -0.3;
        Field2D out = limiter_clamp_2d(prev, next);
        CHECK(out(2, 2) == 0.0);
    }
    SECTION("output always lies in the stencil range") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                prev(i, j) = dist(rng);
                next(i, j) = 3.0 * dist(rng);
            }
        fill_ghosts(prev, bc, 0.0);
        Field2D out = limiter_clamp_2d(prev, next);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double lo = std::min({prev(i, j), prev(i - 1, j), prev(i + 1, j),
                                            prev(i, j - 1), prev(i, j + 1)});
                const double hi = std::max({prev(i, j), prev(i - 1, j), prev(i + 1, j),
                                            prev(i, j - 1), prev(i, j + 1)});
                CHECK(out(i, j) >= lo);
                CHECK(out(i, j) <= hi);
            }
    }
}

TEST_CASE("obstacle cut") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    Field1D u(g, 4);
    for (int j = 0; j < 4; ++j) u(j) = 0.1 * j;

    SECTION("inactive obstacle changes nothing") {
        Field1D v = u;
        apply_obstacle(v, std::vector<double>(4, -1e9));
        for (int j = 0; j < 4; ++j) CHECK(v(j) == u(j));
    }
    SECTION("active obstacle pins the value") {
        Field1D v = u;
        apply_obstacle(v, std::vector<double>(4, 0.25));
        CHECK(v(0) == 0.25);
        CHECK(v(1) == 0.25);
        CHECK(v(2) == 0.25);
        CHECK(v(3) == Catch::Approx(0.3));
    }
    SECTION("output dominates the obstacle") {
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> gvals(4);
        Field1D v = u;
        for (int j = 0; j < 4; ++j) {
            gvals[static_cast<size_t>(j)] = dist(rng);
            v(j) = dist(rng);
        }
        apply_obstacle(v, gvals);
        for (int j = 0; j < 4; ++j) CHECK(v(j) >= gvals[static_cast<size_t>(j)]);
    }
}

TEST_CASE("fixed-point driver") {
    auto g = Grid1D::make(0.0, 4.0, 8);
    Field1D u(g, 8);
    for (int j = 0; j < 8; ++j) u(j) = std::cos(0.9 * j);

    SECTION("identity converges immediately with zero residual") {
        auto step = [](const Field1D& v, double, StepReport&) { return v; };
        auto res = steady_solve(step, u, 0.1, 1e-6, 5000);
        CHECK(res.status == SteadyStatus::converged);
        CHECK(res.iterations == 1);
        CHECK(res.residual == 0.0);
    }
    SECTION("non-finite iterates are flagged as divergence") {
        auto step = [](const Field1D& v, double, StepReport&) {
            Field1D w = v;
            w(3) = std::numeric_limits<double>::quiet_NaN();
            return w;
        };
        auto res = steady_solve(step, u, 0.1, 1e-6, 5000);
        CHECK(res.status == SteadyStatus::diverged);
    }
    SECTION("slow contraction hits the iteration cap") {
        auto step = [](const Field1D& v, double, StepReport&) {
            Field1D w = v;
            for (int j = 0; j < w.size(); ++j) w(j) = v(j) + 1.0; // never settles
            return w;
        };
        auto res = steady_solve(step, u, 0.1, 1e-6, 25);
        CHECK(res.status == SteadyStatus::iteration_limit);
        CHECK(res.iterations == 25);
    }
}

TEST_CASE("steady benchmark uses the published stopping rule") {
    auto p = example5_steady_eikonal();
    CHECK(p.steady_tol == 1e-6);
    CHECK(p.steady_max_iters == 5000);
}

TEST_CASE("piecewise linear interpolation") {
    auto g = Grid1D::make(0.0, 4.0, 4);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u(g, 4);
    u(0) = 0.0; u(1) = 1.0; u(2) = 0.0; u(3) = 0.0;
    fill_ghosts(u, bc, 0.0);
    CHECK(p1_interpolate(u, 0.5) == 0.5); // midpoint of a unit cell
    CHECK(p1_interpolate(u, 1.0) == 1.0);
    CHECK_THROWS_AS(p1_interpolate(u, 100.0), std::domain_error);
}

TEST_CASE("controlled step: trivial dynamics reproduce the field") {
    auto g = Grid1D::make(0.0, 4.0, 8);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u(g, 8);
    for (int j = 0; j < 8; ++j) u(j) = std::sin(0.8 * j);
    SlDynamics1D dyn;
    dyn.controls_a = {0.0};
    dyn.controls_b = {0.0};
    dyn.f = [](double, double, double) { return 0.0; };
    dyn.ell = [](double, double, double) { return 0.0; };
    Field1D out = sl_monotone_step_1d(u, dyn, bc, 0.0, 0.2);
    for (int j = 0; j < 8; ++j) CHECK(out(j) == Catch::Approx(u(j)).margin(1e-13));
}

TEST_CASE("controlled step: unit leftward drift shifts by one cell") {
    const double s = 0.75;
    auto g = Grid1D::make(0.0, 4.0, 16);
    auto bc = BoundaryCondition1D::dirichlet([s](double t, double x) { return s * (x - t); });
    Field1D u = Field1D::sample(g, bc, [s](double x) { return s * x; });
    SlDynamics1D dyn;
    dyn.controls_a = {0.0};
    dyn.controls_b = {0.0};
    dyn.f = [](double, double, double) { return -1.0; };
    dyn.ell = [](double, double, double) { return 0.0; };
    const double tau = g.dx;
    Field1D out = sl_monotone_step_1d(u, dyn, bc, 0.0, tau);
    for (int j = 1; j < out.size() - 1; ++j) {
        CHECK(out(j) == Catch::Approx(u(j - 1)).margin(1e-14));
        // matches the exact transport of affine data under v_t + v_x = 0
        CHECK(out(j) == Catch::Approx(s * (g.x(j) - tau)).margin(1e-14));
    }
}

// ---------------------------------------------------------------------------
// Order-preservation and filter properties
// ---------------------------------------------------------------------------

namespace {

struct MonotoneCase {
    const char* name;
    NumHamiltonian1D h;
    double cfl_over_slope; // tau = this * dx / max(1, realized slope bound)
    bool slope_scaled;
};

} // namespace

TEST_CASE("order preservation of the monotone updates") {
    std::mt19937 rng(2717);
    auto g = Grid1D::make(-1.0, 1.0, 32);
    auto bc = BoundaryCondition1D::periodic();
    std::uniform_real_distribution<double> bump(0.0, 0.5);

    std::vector<MonotoneCase> cases = {
        {"upwind |p|", h_upwind_eikonal, 0.9, false},
        {"upwind p^2/2", h_upwind_burgers, 0.45, true},
        {"LF |p|", h_lax_friedrichs([](double, double p) { return std::abs(p); }, 1.0), 0.9,
         false},
        {"upwind advection", [](double, double um, double) { return um; }, 0.9, false},
    };

    for (auto& c : cases) {
        INFO(c.name);
        double worst = 0.0;
        for (int pair = 0; pair < 200; ++pair) {
            Field1D u = random_smooth_field(g, rng);
            Field1D v = u;
            for (int j = 0; j < v.size(); ++j) v(j) += bump(rng);
            double tau = c.cfl_over_slope * g.dx;
            if (c.slope_scaled)
                tau /= std::max(1.0, max_slope(u) + max_slope(v));
            Field1D su = monotone_euler_step_1d(u, c.h, bc, 0.0, tau);
            Field1D sv = monotone_euler_step_1d(v, c.h, bc, 0.0, tau);
            for (int j = 0; j < su.size(); ++j) worst = std::max(worst, su(j) - sv(j));
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("order preservation of the controlled step") {
    std::mt19937 rng(515);
    auto g = Grid1D::make(-1.0, 1.0, 32);
    auto bc = BoundaryCondition1D::periodic();
    std::uniform_real_distribution<double> bump(0.0, 0.5);
    SlDynamics1D dyn;
    for (int k = 0; k <= 4; ++k) dyn.controls_a.push_back(-1.0 + 0.5 * k);
    dyn.controls_b = {0.0};
    dyn.f = [](double, double a, double) { return a; };
    dyn.ell = [](double, double, double) { return 0.0; };

    double worst = 0.0;
    for (int pair = 0; pair < 200; ++pair) {
        Field1D u = random_smooth_field(g, rng);
        Field1D v = u;
        for (int j = 0; j < v.size(); ++j) v(j) += bump(rng);
        Field1D su = sl_monotone_step_1d(u, dyn, bc, 0.0, 0.9 * g.dx);
        Field1D sv = sl_monotone_step_1d(v, dyn, bc, 0.0, 0.9 * g.dx);
        for (int j = 0; j < su.size(); ++j) worst = std::max(worst, su(j) - sv(j));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("filtered update stays within eps*tau of the monotone update") {
    std::mt19937 rng(909);
    auto g = Grid1D::make(-1.0, 1.0, 32);
    auto bc = BoundaryCondition1D::periodic();
    for (auto filter : {FilterKind::cutoff, FilterKind::froese_oberman}) {
        FilteredStep1D step;
        step.h_monotone = h_upwind_eikonal;
        step.H = [](double, double p) { return std::abs(p); };
        step.bc = bc;
        step.filter = filter;
        step.eps = 0.05; // tight margin so both branches occur
        step.tau = 0.9 * g.dx;
        for (int trial = 0; trial < 50; ++trial) {
            Field1D u = random_smooth_field(g, rng);
            Field1D sm = monotone_euler_step_1d(u, step.h_monotone, bc, 0.0, step.tau);
            StepReport rep;
            Field1D sf = step(u, 0.0, rep);
            for (int j = 0; j < sf.size(); ++j)
                CHECK(std::abs(sf(j) - sm(j)) <= step.eps * step.tau * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("filtered update preserves order up to 2*eps*tau") {
    std::mt19937 rng(4242);
    auto g = Grid1D::make(-1.0, 1.0, 32);
    auto bc = BoundaryCondition1D::periodic();
    std::uniform_real_distribution<double> bump(0.0, 0.4);
    FilteredStep1D step;
    step.h_monotone = h_upwind_eikonal;
    step.H = [](double, double p) { return std::abs(p); };
    step.bc = bc;
    step.filter = FilterKind::cutoff;
    step.eps = 0.08;
    step.tau = 0.9 * g.dx;

    double worst = 0.0;
    StepReport rep;
    for (int pair = 0; pair < 200; ++pair) {
        Field1D u = random_smooth_field(g, rng);
        Field1D v = u;
        for (int j = 0; j < v.size(); ++j) v(j) += bump(rng);
        Field1D su = step(u, 0.0, rep);
        Field1D sv = step(v, 0.0, rep);
        for (int j = 0; j < su.size(); ++j) worst = std::max(worst, su(j) - sv(j));
    }
    CHECK(worst <= 2.0 * step.eps * step.tau + 1e-12);
}

TEST_CASE("filtered update equals the high-order update exactly on smooth data") {
    auto g = Grid1D::make(-1.0, 1.0, 64);
    auto bc = BoundaryCondition1D::periodic();
    Field1D u(g, 64);
    for (int j = 0; j < 64; ++j) u(j) = 0.5 * std::sin(std::numbers::pi * g.x(j));

    FilteredStep1D step;
    step.h_monotone = h_upwind_eikonal;
    step.H = [](double, double p) { return std::abs(p); };
    step.bc = bc;
    step.filter = FilterKind::cutoff;
    step.eps = 5.0 * g.dx;
    step.tau = 0.37 * g.dx;

    auto stage = [&](const Field1D& v, double ts) {
        return centered_euler_step_1d(v, step.H, bc, ts, step.tau);
    };
    Field1D sa = rk2_compose_1d(stage, u, bc, 0.0, step.tau);

    StepReport rep;
    Field1D sf = step(u, 0.0, rep);
    CHECK(rep.high_order_fraction == 1.0);
    for (int j = 0; j < 64; ++j) CHECK(sf(j) == sa(j)); // bitwise
}

TEST_CASE("time marching flags non-finite fields") {
    auto g = Grid1D::make(0.0, 1.0, 8);
    Field1D u(g, 8);
    for (int j = 0; j < 8; ++j) u(j) = 1.0;
    auto bad_step = [](const Field1D& v, double, StepReport&) {
        Field1D w = v;
        w(2) = std::numeric_limits<double>::infinity();
        return w;
    };
    auto res = march(bad_step, u, TimeGrid::cover(1.0, 0.25));
    CHECK(res.diverged);
    CHECK(res.steps_taken == 1);
}
