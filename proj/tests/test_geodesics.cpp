#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/geodesic.hpp"
#include "cclab/manifold.hpp"

using namespace cclab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("model geodesic: great circle to (0, 2z')") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p{2, 0, 0, 0};
    const Vec v{0, 0, 1, 0};
    const auto st = make_geodesic_state(M, p, v, 0.0);
    const auto rec = integrate_geodesic(M, st, kPi, 65);
    REQUIRE(rec.t.size() == 65);
    double worst = 0.0;
    for (size_t i = 0; i < rec.t.size(); ++i) {
        const double t = rec.t[i];
        const Vec want{2 * std::cos(t / 2), 0, 2 * std::sin(t / 2), 0};
        worst = std::fmax(worst, norm(rec.states[i].position - want));
    }
    CHECK(worst < 1e-8);
    const Vec end = rec.states.back().position;
    CHECK(std::fabs(end[2] - 2.0) < 1e-8);
    CHECK(rec.speed_drift < 1e-9);
}

TEST_CASE("t_max = 0 returns the start unchanged") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto st = make_geodesic_state(M, Vec{2, 0, 0, 0}, Vec{0, 0, 1, 0}, 0.5);
    const auto rec = integrate_geodesic(M, st, 0.0);
    REQUIRE(rec.t.size() == 1);
    CHECK(norm(rec.states[0].position - st.position) == 0.0);
    CHECK(rec.states[0].a == 0.5);
}

TEST_CASE("conservation: speed and a over a long span") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto st = make_geodesic_state(M, Vec{2, 0, 0, 0}, Vec{0, 0, 1, 0}, 1.0);
    const auto rec = integrate_geodesic(M, st, 2 * kPi, 129);
    CHECK(rec.speed_drift < 1e-8);
    CHECK(rec.a_drift < 1e-8);
    const auto H = ManifoldHandle::heisenberg();
    const auto sth = make_geodesic_state(H, Vec{0, 0, 0}, Vec{1, 0, 0}, 0.7);
    const auto rech = integrate_geodesic(H, sth, 2 * kPi, 65);
    CHECK(rech.speed_drift < 1e-8);
    const auto K = ManifoldHandle::hopf(2, 1, 1);
    SplitMix64 rng(5);
    const Vec pk = random_point(K, rng);
    const auto stk = make_geodesic_state(K, pk, random_horizontal(K, pk, rng), -0.8);
    const auto reck = integrate_geodesic(K, stk, 2 * kPi, 65);
    CHECK(reck.speed_drift < 1e-8);
}

TEST_CASE("invalid starts are rejected") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    GeodesicState bad;
    bad.position = Vec{1, 0, 0, 0};  // off the sphere
    bad.velocity = Vec{0, 0, 1, 0};
    CHECK_THROWS_AS(integrate_geodesic(M, bad, 1.0), std::invalid_argument);
    GeodesicState tilted = make_geodesic_state(M, Vec{2, 0, 0, 0}, Vec{0, 0, 1, 0}, 0.0);
    tilted.velocity = xi(M, tilted.position);  // not horizontal
    CHECK_THROWS_AS(integrate_geodesic(M, tilted, 1.0), std::invalid_argument);
}

TEST_CASE("frame transport: v0 = xi, orthonormality, transverse derivatives") {
    const auto M = ManifoldHandle::hopf(1, 1, 2);
    SplitMix64 rng(11);
    const Vec p = random_point(M, rng);
    const auto st = make_geodesic_state(M, p, random_horizontal(M, p, rng), 0.0);
    auto rec = integrate_geodesic(M, st, kPi, 33);
    transport_frame(M, rec);
    REQUIRE(rec.states.back().frame.size() == 5);
    for (size_t i = 0; i < rec.t.size(); ++i) {
        const auto& s = rec.states[i];
        CHECK(norm(s.frame[0] - xi(M, s.position)) < 1e-8);
        CHECK(norm(s.frame[1] - s.velocity) < 1e-8);
        for (size_t a = 0; a < s.frame.size(); ++a)
            for (size_t b = 0; b <= a; ++b) {
                const double want = a == b ? 1.0 : 0.0;
                CHECK(std::fabs(metric(M, s.position, s.frame[a], s.frame[b]) - want) < 1e-8);
            }
        // N components vanish on the Sasakian models, so the v2 row couples
        // only to v0 and v1
        for (int j = 3; j < rec.Ncomp[i].size(); ++j) CHECK(std::fabs(rec.Ncomp[i][j]) < 1e-6);
        CHECK(rec.H[i].max_abs() < 1e-9);
        CHECK((rec.states[i].u_rot - Mat::identity(2)).max_abs() == 0.0);
    }
}

TEST_CASE("frame transport with a != 0 keeps the frame orthonormal to 2pi") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto st = make_geodesic_state(M, Vec{2, 0, 0, 0}, Vec{0, 0, 0, 1}, 1.0);
    auto rec = integrate_geodesic(M, st, 2 * kPi, 65);
    transport_frame(M, rec);
    const auto& s = rec.states.back();
    for (size_t a = 0; a < s.frame.size(); ++a)
        for (size_t b = 0; b <= a; ++b) {
            const double want = a == b ? 1.0 : 0.0;
            CHECK(std::fabs(metric(M, s.position, s.frame[a], s.frame[b]) - want) < 1e-8);
        }
}

TEST_CASE("cc_distance: antipodal fiber pair at distance pi") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p{2, 0, 0, 0}, q{0, 0, 2, 0};
    ShootConfig cfg;
    cfg.direction_samples = 8;
    cfg.a_samples = 5;
    const auto res = cc_distance(M, p, q, cfg);
    REQUIRE(res.converged);
    CHECK(res.gap < 1e-6);
    CHECK(std::fabs(res.distance - kPi) < 1e-4);
    CHECK_THROWS_AS(cc_distance(M, p, p, cfg), std::invalid_argument);
}

TEST_CASE("cc_distance: shrinking along the fiber and symmetry") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p{2, 0, 0, 0};
    ShootConfig cfg;
    cfg.direction_samples = 6;
    cfg.a_samples = 7;
    double prev = 1e9;
    for (double s : {0.8, 0.4, 0.2}) {
        const auto res = cc_distance(M, p, reeb_flow(M, p, s), cfg);
        REQUIRE(res.converged);
        CHECK(res.distance > 0.0);
        CHECK(res.distance < prev);
        prev = res.distance;
    }
    SplitMix64 rng(9);
    const Vec a = random_point(M, rng), b = random_point(M, rng);
    const auto dab = cc_distance(M, a, b, cfg);
    const auto dba = cc_distance(M, b, a, cfg);
    REQUIRE(dab.converged);
    REQUIRE(dba.converged);
    CHECK(std::fabs(dab.distance - dba.distance) < 2e-4);
}

TEST_CASE("geodesics with a and -a are J-mirror images") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p{2, 0, 0, 0};
    const Vec v{0, 0, 1, 0};
    const double a = 0.9;
    const auto plus = integrate_geodesic(M, make_geodesic_state(M, p, v, a), 2.0, 33);
    const auto minus = integrate_geodesic(M, make_geodesic_state(M, p, v, -a), 2.0, 33);
    // complex conjugation coordinate-wise fixes p and v, reverses J and
    // hence the vertical momentum: it maps the +a path onto the -a one
    double worst = 0.0;
    for (size_t i = 0; i < plus.t.size(); ++i) {
        Vec mirrored = plus.states[i].position;
        mirrored[1] = -mirrored[1];
        mirrored[3] = -mirrored[3];
        worst = std::fmax(worst, norm(mirrored - minus.states[i].position));
    }
    CHECK(worst < 1e-8);
}
