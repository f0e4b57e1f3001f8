#include <osc_transport/core.hpp>
#include <osc_transport/fixed_solver.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace osc_transport;

namespace {

// Independent check: classical RK4 on the equations of motion.
PhaseState rk4(PhaseState s, int u, double omega, double a_max, double dt, int steps) {
    const double a = u * a_max;
    auto rhs = [&](const std::array<double, 4>& y) {
        return std::array<double, 4>{y[1], -omega * omega * y[0] - a, y[3], a};
    };
    std::array<double, 4> y{s.x_h, s.v_h, s.x_w, s.v_w};
    const double h = dt / steps;
    for (int i = 0; i < steps; ++i) {
        auto k1 = rhs(y);
        std::array<double, 4> t;
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k1[j];
        auto k2 = rhs(t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + 0.5 * h * k2[j];
        auto k3 = rhs(t);
        for (int j = 0; j < 4; ++j) t[j] = y[j] + h * k3[j];
        auto k4 = rhs(t);
        for (int j = 0; j < 4; ++j) y[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }
    return {s.t + dt, y[0], y[1], y[2], y[3]};
}

} // namespace

TEST(Propagate, ResonantHalfPeriodReturnsToRest) {
    const double T = t_abs(1.0, 1.0);
    const PhaseState s = propagate_segment({}, {0.5 * T, +1, omega_res(1.0, 1.0)}, 1.0);
    EXPECT_NEAR(s.x_h, 0.0, 1e-14);
    EXPECT_NEAR(s.v_h, 0.0, 1e-14);
    EXPECT_NEAR(s.x_w, 0.5, 1e-14);
    EXPECT_NEAR(s.v_w, 1.0, 1e-14);
}

TEST(Propagate, ZeroDurationIsIdentity) {
    const PhaseState s{0.3, 0.1, -0.2, 1.5, 0.7};
    const PhaseState out = propagate_segment(s, {0.0, -1, 3.0}, 2.0);
    EXPECT_EQ(out.t, s.t);
    EXPECT_EQ(out.x_h, s.x_h);
    EXPECT_EQ(out.v_h, s.v_h);
    EXPECT_EQ(out.x_w, s.x_w);
    EXPECT_EQ(out.v_w, s.v_w);
}

TEST(Propagate, HalfRotationAboutEquilibrium) {
    const PhaseState s = propagate_segment({}, {pi, +1, 1.0}, 1.0);
    EXPECT_NEAR(s.x_h, -2.0, 1e-14);
    EXPECT_NEAR(s.v_h, 0.0, 1e-14);
}

TEST(Propagate, MatchesRk4) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const PhaseState s{0.0, U(rng), U(rng), U(rng), U(rng)};
        const double omega = (k % 5 == 0) ? 0.0 : 5.0 * (U(rng) + 1.0);
        const int u = k % 2 ? 1 : -1;
        const double dt = 1.0 + U(rng);
        const PhaseState a = propagate_segment(s, {dt, u, omega}, 1.3);
        const PhaseState b = rk4(s, u, omega, 1.3, dt, 4000);
        EXPECT_NEAR(a.x_h, b.x_h, 1e-9);
        EXPECT_NEAR(a.v_h, b.v_h, 1e-9);
        EXPECT_NEAR(a.x_w, b.x_w, 1e-12);
        EXPECT_NEAR(a.v_w, b.v_w, 1e-12);
    }
}

TEST(Propagate, RejectsBadInput) {
    EXPECT_THROW(propagate_segment({}, {-1.0, 1, 1.0}, 1.0), TransportError);
    EXPECT_THROW(propagate_segment({}, {1.0, 0, 1.0}, 1.0), TransportError);
    EXPECT_THROW(propagate_segment({}, {1.0, 1, -1.0}, 1.0), TransportError);
    EXPECT_THROW(propagate_segment({}, {1.0, 1, 1.0}, 0.0), TransportError);
    PhaseState bad;
    bad.x_h = NAN;
    EXPECT_THROW(propagate_segment(bad, {1.0, 1, 1.0}, 1.0), TransportError);
}

TEST(Propagate, RotationRadiusConserved) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const double omega = 0.1 + std::abs(U(rng)) * 5.0;
        const int u = k % 2 ? 1 : -1;
        const double a = 0.5 + std::abs(U(rng));
        PhaseState s{0.0, U(rng), U(rng), 0.0, 0.0};
        auto radius = [&](const PhaseState& p) {
            return std::abs(std::complex<double>(p.x_h + u * a / (omega * omega), p.v_h / omega));
        };
        const double r0 = radius(s);
        const PhaseState out = propagate_segment(s, {std::abs(U(rng)) * 3.0, u, omega}, a);
        EXPECT_NEAR(radius(out), r0, 1e-12 * std::max(1.0, r0));
    }
}

TEST(Propagate, BackwardStepRestoresState) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const PhaseState s{U(rng), U(rng), U(rng), U(rng), U(rng)};
        const double omega = k % 7 == 0 ? 0.0 : 4.0 * std::abs(U(rng));
        const double dt = 2.0 * U(rng);
        const int u = k % 2 ? 1 : -1;
        const PhaseState back =
            detail::advance(detail::advance(s, u, omega, 1.0, dt), u, omega, 1.0, -dt);
        EXPECT_NEAR(back.x_h, s.x_h, 1e-12);
        EXPECT_NEAR(back.v_h, s.v_h, 1e-12);
        EXPECT_NEAR(back.x_w, s.x_w, 1e-12);
        EXPECT_NEAR(back.v_w, s.v_w, 1e-12);
    }
}

TEST(Simulate, ResonantTwoSegmentProtocol) {
    const Protocol p{1.0, {{1.0, +1, two_pi}, {1.0, -1, two_pi}}};
    const Trajectory tr = simulate(p, {}, 0.01);
    EXPECT_NEAR(tr.final.x_w, 1.0, 1e-12);
    const BoundaryReport r = boundary_residual(tr.final, 1.0, 1e-12);
    EXPECT_TRUE(r.passed) << r.max_abs();
}

TEST(Simulate, SamplesIncludeBoundariesAndIncrease) {
    const Protocol p{1.0, {{0.35, +1, 3.0}, {0.0, -1, 3.0}, {0.4, -1, 0.0}}};
    const Trajectory tr = simulate(p, {}, 0.1);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) EXPECT_LT(tr.samples[i - 1].t, tr.samples[i].t);
    bool has_boundary = false;
    for (const auto& s : tr.samples) has_boundary |= s.t == 0.35;
    EXPECT_TRUE(has_boundary);
    EXPECT_DOUBLE_EQ(tr.final.t, 0.75);
    EXPECT_EQ(tr.samples.back().t, tr.final.t);
}

TEST(Simulate, EmptyAndZeroDurationProtocols) {
    const PhaseState init{0.0, 0.1, 0.2, 0.3, 0.4};
    for (const Protocol& p : {Protocol{1.0, {}}, Protocol{1.0, {{0.0, 1, 2.0}}}}) {
        const Trajectory tr = simulate(p, init, 0.1);
        EXPECT_EQ(tr.final.x_h, init.x_h);
        EXPECT_EQ(tr.final.v_w, init.v_w);
        EXPECT_EQ(tr.samples.size(), 1u);
    }
    EXPECT_THROW(simulate(Protocol{1.0, {}}, init, 0.0), TransportError);
}

TEST(BoundaryResidual, Basics) {
    EXPECT_TRUE(boundary_residual({1.0, 0.0, 0.0, 3.0, 0.0}, 3.0, 1e-9).passed);
    PhaseState f{1.0, 0.0, 0.0, 1.0, 1e-3};
    const BoundaryReport r = boundary_residual(f, 1.0, 1e-9);
    EXPECT_FALSE(r.passed);
    EXPECT_DOUBLE_EQ(r.residual_vw, 1e-3);
    // tolerance scales with max(1, |d|)
    EXPECT_TRUE(boundary_residual({0.0, 0.0, 0.0, 1000.0 + 5e-7, 0.0}, 1000.0, 1e-9).passed);
    EXPECT_THROW(boundary_residual(f, 1.0, 0.0), TransportError);
}

TEST(WagonVelocity, ResonantNeverNegative) {
    const Protocol p{1.0, {{1.0, +1, two_pi}, {1.0, -1, two_pi}}};
    const VelocityExtrema e = wagon_velocity_extrema(p);
    EXPECT_NEAR(e.min_v_w, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(e.max_v_w, 1.0);
    EXPECT_FALSE(e.goes_negative);
}

TEST(Scaling, Examples) {
    const ScaledProblem a = to_scaled({1.0, 1.0, two_pi});
    EXPECT_DOUBLE_EQ(a.omega, two_pi);
    EXPECT_DOUBLE_EQ(a.scaling.to_scaled_time(t_abs(1.0, 1.0)), 2.0);

    const ScaledProblem b = to_scaled({4.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(b.scaling.rate(), 0.5);
    EXPECT_DOUBLE_EQ(b.scaling.to_scaled_time(t_abs(4.0, 1.0)), 2.0);

    const ScaledProblem c = to_scaled({2.82 * pi * pi, 1.0, 1.0});
    EXPECT_NEAR(c.omega, std::sqrt(2.82) * pi, 1e-12);
    EXPECT_NEAR(c.omega, 5.277, 2e-3);

    EXPECT_THROW(to_scaled({0.0, 1.0, 1.0}), TransportError);
    EXPECT_THROW(to_scaled({1.0, -1.0, 1.0}), TransportError);
}

TEST(Scaling, RoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> L(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
        const TransportParams p{std::pow(10.0, L(rng)), std::pow(10.0, L(rng)), std::pow(10.0, L(rng))};
        const TransportParams q = from_scaled(to_scaled(p));
        EXPECT_NEAR(q.d, p.d, 1e-14 * p.d);
        EXPECT_NEAR(q.a_max, p.a_max, 1e-14 * p.a_max);
        EXPECT_NEAR(q.omega, p.omega, 1e-14 * p.omega);

        const Scaling sc(p.d, p.a_max);
        const PhaseState s{L(rng), L(rng), L(rng), L(rng), L(rng)};
        const PhaseState r = sc.from_scaled(sc.to_scaled(s));
        EXPECT_NEAR(r.t, s.t, 1e-14 * std::abs(s.t));
        EXPECT_NEAR(r.v_h, s.v_h, 1e-14 * std::abs(s.v_h));
        EXPECT_NEAR(r.x_w, s.x_w, 1e-14 * std::abs(s.x_w));
    }
}

TEST(Scaling, ScaledProtocolGivesSameFinalState) {
    const TransportParams p{27.83, 2.0, 1.0};
    const FixedSolution s = solve_fixed(p);
    const Scaling sc(p.d, p.a_max);
    const PhaseState phys = propagate(s.protocol);
    const PhaseState scaled = sc.from_scaled(propagate(sc.to_scaled(s.protocol)));
    EXPECT_NEAR(phys.x_w, scaled.x_w, 1e-10 * p.d);
    EXPECT_NEAR(phys.v_w, scaled.v_w, 1e-10);
}
