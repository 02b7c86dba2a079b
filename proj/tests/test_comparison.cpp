#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/comparison.hpp"
#include "cclab/riccati.hpp"

using namespace cclab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("diameter check on hopf(1,1,1): blow-ups within 2 pi") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    DiameterOptions opts;
    opts.margin_samples = 60;
    opts.distance_pairs = 1;
    opts.threads = 2;
    const auto est = diameter_check(M, DiameterMode::holomorphic, 6, 7, opts);
    REQUIRE(est.applicable);
    CHECK(std::fabs(est.k_used - 1.0) < 1e-6);
    CHECK(std::fabs(est.bound - 2 * kPi) < 1e-5);
    CHECK(est.pass);
    for (double b : est.blowup_times) {
        CHECK(b <= 2 * kPi + 1e-6);
        CHECK(b > kPi);  // no spurious early blow-up
    }
    CHECK(est.empirical_max_distance <= est.bound + 2e-4);
}

TEST_CASE("diameter check trace mode on hopf(1,1,2)") {
    const auto M = ManifoldHandle::hopf(1, 1, 2);
    DiameterOptions opts;
    opts.margin_samples = 60;
    opts.distance_pairs = 0;
    opts.threads = 2;
    const auto est = diameter_check(M, DiameterMode::trace, 4, 7, opts);
    REQUIRE(est.applicable);
    CHECK(std::fabs(est.k_used - std::sqrt(2.0) / 2.0) < 1e-6);
    CHECK(std::fabs(est.bound - 2 * kPi) < 1e-5);
    CHECK(est.pass);
}

TEST_CASE("heisenberg is reported not applicable") {
    const auto M = ManifoldHandle::heisenberg();
    DiameterOptions opts;
    opts.margin_samples = 40;
    const auto est = diameter_check(M, DiameterMode::holomorphic, 2, 7, opts);
    CHECK(!est.applicable);
    CHECK(std::fabs(est.margin) < 1e-6);
}

TEST_CASE("symplectic conjugate check on base(1,2) and base(2,1)") {
    DiameterOptions opts;
    opts.margin_samples = 60;
    opts.threads = 2;
    {
        const auto est = symplectic_conjugate_check(ManifoldHandle::base(1, 2), 5, 7, opts);
        REQUIRE(est.applicable);
        CHECK(std::fabs(est.bound - kPi) < 1e-5);
        for (double b : est.blowup_times) CHECK(std::fabs(b - kPi) < 1e-4);
        for (double b : est.trace_blowups) CHECK(std::fabs(b - 2 * kPi) < 1e-3);
        CHECK(est.pass);
    }
    {
        const auto est = symplectic_conjugate_check(ManifoldHandle::base(2, 1), 5, 7, opts);
        REQUIRE(est.applicable);
        CHECK(std::fabs(est.bound - kPi / 2) < 1e-5);
        for (double b : est.blowup_times) CHECK(std::fabs(b - kPi / 2) < 1e-4);
        CHECK(est.pass);
    }
}

TEST_CASE("numerical Jacobi matrix matches the closed forms") {
    // B rows: (Reeb, direction/t); entries against the closed forms over
    // [0.05, 3.0]
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto P = ModelParams::matched(1.0, 1);
    OrbitDistanceSolver solver(M, 8, 8);  // cheap ctor sanity
    (void)solver;
    SplitMix64 rng(3);
    const Vec c0 = solver.orbit_point();
    const auto basis = horizontal_basis(M, c0);
    const Vec v = basis[0] * std::cos(0.7) + basis[1] * std::sin(0.7);
    // access bundle through tube_volume internals is not exposed; rebuild the
    // check from equality diagnostics' machinery instead via direct fields:
    // integrate Jacobi fields and compare D against t-scaled model B
    const int fine = 241;
    // use the tube route: V for a tiny grid forces the bundle computation;
    // the entrywise check below re-derives D from scratch
    struct Probe {
        std::vector<double> t;
        std::vector<Mat> D;
    };
    Probe probe;
    {
        // re-run a bundle through the public API: equality diagnostics
        // exposes fields only at T, so re-integrate here using geodesics +
        // finite differences of the exponential map as an independent oracle
        const double span = 3.0;
        for (int i = 1; i < fine; ++i) {
            const double t = span * i / (fine - 1);
            if (t < 0.05) continue;
            probe.t.push_back(t);
            Mat D(2, 2);
            // column frame at t
            const auto rec = integrate_geodesic(M, make_geodesic_state(M, c0, v, 0.0), t, 2);
            const Vec x = rec.states.back().position;
            const Vec vel = rec.states.back().velocity;
            const Vec e1 = xi(M, x), e2 = Jop(M, x, vel);
            // Reeb variation by finite differences of the flow family
            const double ds = 1e-5;
            const auto plus = integrate_geodesic(
                M, make_geodesic_state(M, reeb_flow(M, c0, ds), reeb_flow(M, v + c0, ds) - reeb_flow(M, c0, ds), 0.0), t, 2);
            const auto minus = integrate_geodesic(
                M, make_geodesic_state(M, reeb_flow(M, c0, -ds), reeb_flow(M, v + c0, -ds) - reeb_flow(M, c0, -ds), 0.0), t, 2);
            const Vec JR = (plus.states.back().position - minus.states.back().position) * (0.5 / ds);
            // direction variation
            const Vec w = Jop(M, c0, v);
            const auto dp = integrate_geodesic(
                M, make_geodesic_state(M, c0, v * std::cos(ds) + w * std::sin(ds), 0.0), t, 2);
            const auto dm = integrate_geodesic(
                M, make_geodesic_state(M, c0, v * std::cos(ds) - w * std::sin(ds), 0.0), t, 2);
            const Vec JD = (dp.states.back().position - dm.states.back().position) * (0.5 / ds);
            D(0, 0) = metric(M, x, JR, e1);
            D(0, 1) = metric(M, x, JR, e2);
            D(1, 0) = metric(M, x, JD, e1);
            D(1, 1) = metric(M, x, JD, e2);
            probe.D.push_back(D);
        }
    }
    double worst = 0.0;
    for (size_t i = 0; i < probe.t.size(); ++i) {
        const double t = probe.t[i];
        const Mat Bm = model_B_orbit(P, t);
        Mat Bn(2, 2);
        Bn(0, 0) = probe.D[i](0, 0);
        Bn(0, 1) = probe.D[i](0, 1);
        Bn(1, 0) = probe.D[i](1, 0) / t;
        Bn(1, 1) = probe.D[i](1, 1) / t;
        worst = std::fmax(worst, (Bn - Bm).max_abs());
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("tube volume on the model: ratio 1, routes agree") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    std::vector<double> grid;
    for (double T = 0.1; T <= kPi - 0.1 + 1e-9; T += (kPi - 0.2) / 7.0) grid.push_back(T);
    TubeOptions opts;
    opts.mc_samples = 600;
    opts.threads = 2;
    opts.fine_samples = 513;
    const auto rep = tube_volume(M, grid, 32, 7, opts);
    REQUIRE(rep.detected_m.has_value());
    CHECK(*rep.detected_m == 1);
    for (size_t i = 0; i < rep.T.size(); ++i) {
        CAPTURE(rep.T[i]);
        CHECK(std::fabs(rep.ratio[i] - 1.0) < 1e-3);
    }
    CHECK(rep.ratio_monotone);
    CHECK(rep.routes_agree);
    // no ray stops minimizing inside the sampled span
    CHECK(rep.min_truncation >= (kPi - 0.1) * 1.02 - 1e-9);
    // V and Vbar are nondecreasing in T
    for (size_t i = 0; i + 1 < rep.T.size(); ++i) {
        CHECK(rep.V[i + 1] >= rep.V[i] - 1e-12);
        CHECK(rep.Vbar[i + 1] >= rep.Vbar[i] - 1e-12);
    }
}

TEST_CASE("focal-circle speed at k = 2 discriminates the two candidate constants") {
    // the measured speed is k1^2/2 (one rotation per Reeb period 4 pi/k1^2),
    // not k1/2; the two coincide only at k1 = 1
    const auto M = ManifoldHandle::hopf(2, 1, 1);
    const auto diag = equality_diagnostics(M, 2.0, 7, 6, 2);
    CHECK(std::fabs(diag.rotation_speed - 2.0) < 1e-4);
    CHECK(std::fabs(diag.rotation_speed - 1.0) > 0.5);
    CHECK(diag.rotation_period_err < 1e-6);
    CHECK(diag.velocity_null_residual < 1e-6);
    CHECK(diag.shape_operator_norm < 1e-6);
    REQUIRE(diag.multiplicity.has_value());
    CHECK(*diag.multiplicity == 1);
}

TEST_CASE("numeric Jacobi/Riccati bookkeeping: d/dt log det B = tr S - (2n-1)/t") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec c0{2, 0, 0, 0};
    const auto basis = horizontal_basis(M, c0);
    const Vec v = basis[0] * std::cos(0.3) + basis[1] * std::sin(0.3);
    GeodesicRecord geo;
    geo.manifold = M;
    geo.t = {0.0};
    geo.states = {make_geodesic_state(M, c0, v, 0.0)};
    for (double t : {0.8, 1.6, 2.4}) {
        const double h = 1e-4;
        const auto Bs = normal_jacobi_B(M, v, {t - h, t, t + h});
        const double lhs = (std::log(determinant(Bs[2])) - std::log(determinant(Bs[0]))) / (2 * h);
        const auto tr = integrate_riccati_orbit(M, geo, t, t + 1e-3, 2);
        const double rhs = tr.S.front().trace() - 1.0 / t;
        CHECK(std::fabs(lhs - rhs) < 1e-7);
    }
}

TEST_CASE("tube truncation finds the conjugate radius past pi") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    TubeOptions opts;
    opts.mc_samples = 0;
    opts.threads = 2;
    opts.fine_samples = 769;
    const auto rep = tube_volume(M, {3.3}, 8, 7, opts);
    CHECK(std::fabs(rep.min_truncation - kPi) < 1e-4);
    // the volume saturates at the full tube volume = vol(M)
    CHECK(std::fabs(rep.V[0] - total_volume(M)) < 1e-4 * total_volume(M));
}

TEST_CASE("tube volume detects the quotient: m = 2, ratio 1/2") {
    const auto M = ManifoldHandle::hopf(1, 2, 1);
    std::vector<double> grid = {0.4, 1.0, 1.8, 2.6, kPi - 0.1};
    TubeOptions opts;
    opts.mc_samples = 600;
    opts.threads = 2;
    opts.fine_samples = 513;
    const auto rep = tube_volume(M, grid, 24, 7, opts);
    REQUIRE(rep.detected_m.has_value());
    CHECK(*rep.detected_m == 2);
    for (size_t i = 0; i < rep.T.size(); ++i) CHECK(std::fabs(rep.ratio[i] - 0.5) < 1e-2);
    CHECK(rep.routes_agree);
}

TEST_CASE("equality diagnostics on hopf(1,m,1)") {
    for (int m : {1, 2}) {
        CAPTURE(m);
        const auto M = ManifoldHandle::hopf(1, m, 1);
        const auto diag = equality_diagnostics(M, 1.0, 7, 12, 2);
        CHECK(diag.shape_operator_norm < 1e-6);
        CHECK(diag.xi_tangency < 1e-6);
        CHECK(diag.j_invariance < 1e-6);
        REQUIRE(diag.multiplicity.has_value());
        CHECK(*diag.multiplicity == m);
        CHECK(diag.exp_circle_count == m);
        CHECK(diag.velocity_null_residual < 1e-6);
        CHECK(diag.rotation_period_err < 1e-4);
        // focal points sit on the x = 0 circle |z2| = 2
        for (const auto& x : diag.focal_points) {
            CHECK(std::hypot(x[0], x[1]) < 1e-6);
            CHECK(std::fabs(std::hypot(x[2], x[3]) - 2.0) < 1e-6);
        }
    }
}
