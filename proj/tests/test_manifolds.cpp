#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/fd.hpp"
#include "cclab/manifold.hpp"

using namespace cclab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

std::vector<ManifoldHandle> contact_models() {
    return {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(1, 1, 2), ManifoldHandle::hopf(2, 1, 1),
            ManifoldHandle::heisenberg()};
}

}  // namespace

TEST_CASE("parse and describe") {
    const auto h = ManifoldHandle::parse("hopf:k=2,m=3,n=2");
    CHECK(h.kind == ManifoldKind::hopf);
    CHECK(h.k == 2.0);
    CHECK(h.m == 3);
    CHECK(h.n == 2);
    CHECK(h.dim() == 5);
    CHECK(h.ambient_dim() == 6);
    CHECK(ManifoldHandle::parse("base:k=1,n=2").dim() == 4);
    CHECK(ManifoldHandle::parse("heisenberg").dim() == 3);
    CHECK_THROWS_AS(ManifoldHandle::parse("torus"), std::invalid_argument);
    CHECK_THROWS_AS(ManifoldHandle::parse("hopf:q=1"), std::invalid_argument);
    CHECK_THROWS_AS(ManifoldHandle::parse("hopf:k=-1"), std::invalid_argument);
    CHECK(ManifoldHandle::parse(h.describe()).m == 3);
}

TEST_CASE("contact data at the reference point of hopf(1,1,1)") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec z{2, 0, 0, 0};
    const auto cd = contact_data(M, {z, {}});
    // xi = -i z / 2 = (0, -1, 0, 0)
    CHECK(std::fabs(cd.xi[0]) < 1e-15);
    CHECK(std::fabs(cd.xi[1] + 1.0) < 1e-15);
    CHECK(std::fabs(cd.eta_of(cd.xi) - 1.0) < 1e-14);
    // J v = i v on the horizontal part
    const Vec v{0, 0, 1, 0};
    const Vec jv = cd.J_of(v);
    CHECK(std::fabs(jv[3] - 1.0) < 1e-14);
    CHECK(std::fabs(jv[0]) + std::fabs(jv[1]) + std::fabs(jv[2]) < 1e-14);
    // off-manifold points are rejected
    CHECK_THROWS_AS(contact_data(M, {Vec{1, 0, 0, 0}, {}}), std::invalid_argument);
}

TEST_CASE("compatibility identities at random points") {
    for (const auto& M : contact_models()) {
        CAPTURE(M.describe());
        SplitMix64 rng(2024);
        double worst_alg = 0.0, worst_fd = 0.0;
        for (int s = 0; s < 200; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            const Vec Y = random_horizontal(M, p, rng);
            const Vec xiv = xi(M, p);
            worst_alg = std::fmax(worst_alg, std::fabs(eta(M, p, xiv) - 1.0));
            worst_alg = std::fmax(worst_alg, std::fabs(vnorm(M, p, xiv) - 1.0));
            worst_alg = std::fmax(worst_alg, vnorm(M, p, Jop(M, p, xiv)));
            // J^2 = -Id on ker eta
            worst_alg = std::fmax(worst_alg, vnorm(M, p, Jop(M, p, Jop(M, p, X)) + X));
            // <JX, JY> = <X, Y>
            worst_alg = std::fmax(worst_alg,
                                  std::fabs(metric(M, p, Jop(M, p, X), Jop(M, p, Y)) - metric(M, p, X, Y)));
            // d eta(X, Y) = <X, JY> checked through the Reeb-flow-free identity
            // d eta(X,Y) = X(eta(Y~)) - Y(eta(X~)) - eta([X~, Y~]) with projection extensions
            if (s < 40) {
                const auto extX = extend_tangent(M, X), extY = extend_tangent(M, Y);
                auto along = [&](const Vec& dir, auto&& g) {
                    const double nn = norm(dir);
                    const Vec u = dir * (1.0 / nn);
                    return fd_central([&](double t) { return g(project_point(M, axpy(t, u, p))); }) * nn;
                };
                const double x_etaY = along(X, [&](const Vec& q) { return eta(M, q, extY(q)); });
                const double y_etaX = along(Y, [&](const Vec& q) { return eta(M, q, extX(q)); });
                const Vec lie = along(X, [&](const Vec& q) { return extY(q); }) -
                                along(Y, [&](const Vec& q) { return extX(q); });
                const double deta = x_etaY - y_etaX - eta(M, p, lie);
                worst_fd = std::fmax(worst_fd, std::fabs(deta - metric(M, p, X, Jop(M, p, Y))));
            }
        }
        CHECK(worst_alg < 1e-10);
        CHECK(worst_fd < 1e-6);
    }
}

TEST_CASE("h vanishes on the built-in models") {
    for (const auto& M : contact_models()) {
        CAPTURE(M.describe());
        SplitMix64 rng(5);
        double worst = 0.0;
        for (int s = 0; s < 50; ++s) {
            const Vec p = random_point(M, rng);
            const Vec u = random_tangent(M, p, rng);
            worst = std::fmax(worst, vnorm(M, p, h_op(M, p, u)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("riemann curvature: sphere, base and pair symmetry") {
    SplitMix64 rng(7);
    // hopf(1,1,1): constant sectional curvature 1/4
    {
        const auto M = ManifoldHandle::hopf(1, 1, 1);
        for (int s = 0; s < 20; ++s) {
            const Vec p = random_point(M, rng);
            const Vec u = random_tangent(M, p, rng);
            Vec v = random_tangent(M, p, rng);
            v -= u * metric(M, p, u, v);
            if (vnorm(M, p, v) < 1e-3) continue;
            v *= 1.0 / vnorm(M, p, v);
            CHECK(std::fabs(metric(M, p, riemann(M, p, u, v, v), u) - 0.25) < 1e-10);
        }
    }
    // base(1,2): <Rm(Y,X)X,Y> = 1/4 + (3/4) <X,JY>^2
    {
        const auto M = ManifoldHandle::base(1, 2);
        for (int s = 0; s < 20; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_tangent(M, p, rng);
            Vec Y = random_tangent(M, p, rng);
            Y -= X * metric(M, p, X, Y);
            if (vnorm(M, p, Y) < 1e-3) continue;
            Y *= 1.0 / vnorm(M, p, Y);
            const double xjy = metric(M, p, X, Jop(M, p, Y));
            const double want = 0.25 + 0.75 * xjy * xjy;
            CHECK(std::fabs(metric(M, p, riemann(M, p, Y, X, X), Y) - want) < 1e-8);
            // holomorphic plane
            const Vec JX = Jop(M, p, X);
            CHECK(std::fabs(metric(M, p, riemann(M, p, JX, X, X), JX) - 1.0) < 1e-8);
        }
    }
    // pair symmetry, antisymmetry and first Bianchi on every kind
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 2), ManifoldHandle::hopf(2, 1, 1),
                          ManifoldHandle::base(2, 1), ManifoldHandle::heisenberg()}) {
        CAPTURE(M.describe());
        double worst = 0.0;
        for (int s = 0; s < 40; ++s) {
            const Vec p = random_point(M, rng);
            const Vec u = random_tangent(M, p, rng), v = random_tangent(M, p, rng);
            const Vec w = random_tangent(M, p, rng), x = random_tangent(M, p, rng);
            const double ruvwx = metric(M, p, riemann(M, p, u, v, w), x);
            const double rwxuv = metric(M, p, riemann(M, p, w, x, u), v);
            const double rvuwx = metric(M, p, riemann(M, p, v, u, w), x);
            worst = std::fmax(worst, std::fabs(ruvwx - rwxuv));
            worst = std::fmax(worst, std::fabs(ruvwx + rvuwx));
            const Vec bianchi = riemann(M, p, u, v, w) + riemann(M, p, v, w, u) + riemann(M, p, w, u, v);
            worst = std::fmax(worst, vnorm(M, p, bianchi));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("curvature against finite-difference covariant derivatives") {
    // independent oracle: R(u,v)w = nabla_u nabla_v W - nabla_v nabla_u W - nabla_[u,v] W
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(2, 1, 1), ManifoldHandle::heisenberg()}) {
        CAPTURE(M.describe());
        SplitMix64 rng(13);
        double worst = 0.0;
        for (int s = 0; s < 6; ++s) {
            const Vec p = random_point(M, rng);
            const Vec u = random_tangent(M, p, rng), v = random_tangent(M, p, rng);
            const Vec w = random_tangent(M, p, rng);
            const auto extU = extend_tangent(M, u), extV = extend_tangent(M, v), extW = extend_tangent(M, w);
            const VecField nvW = [&](const Vec& q) { return cov_deriv(M, q, extV(q), extW); };
            const VecField nuW = [&](const Vec& q) { return cov_deriv(M, q, extU(q), extW); };
            const Vec dudv = cov_deriv(M, p, u, nvW);
            const Vec dvdu = cov_deriv(M, p, v, nuW);
            // [u~, v~] from the extension fields
            const VecField lie = [&](const Vec& q) { return q; };
            (void)lie;
            auto along = [&](const Vec& dir, const VecField& g) {
                const double nn = norm(dir);
                const Vec ud = dir * (1.0 / nn);
                return fd_central([&](double t) { return g(project_point(M, axpy(t, ud, p))); }) * nn;
            };
            const Vec bracket = along(u, extV) - along(v, extU);
            const Vec rm_fd = dudv - dvdu - cov_deriv(M, p, tangent_project(M, p, bracket), extW);
            worst = std::fmax(worst, vnorm(M, p, rm_fd - riemann(M, p, u, v, w)));
        }
        CHECK(worst < 2e-4);  // stacked finite differences
    }
}

TEST_CASE("tanaka-webster curvature on the models") {
    SplitMix64 rng(31);
    {
        const auto M = ManifoldHandle::hopf(1, 1, 1);
        for (int s = 0; s < 10; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            const Vec JX = Jop(M, p, X);
            const double hol = metric(M, p, tanaka_curvature(M, p, JX, X, X), JX);
            CHECK(std::fabs(hol - 1.0) < 1e-8);
        }
    }
    {
        const auto M = ManifoldHandle::hopf(1, 1, 2);
        for (int s = 0; s < 10; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            // trace over {X, JX}^perp inside ker eta
            const auto basis = horizontal_basis(M, p);
            std::vector<Vec> comp = {X, Jop(M, p, X)};
            double tr = 0.0;
            int found = 0;
            for (const auto& b : basis) {
                Vec y = b;
                for (const auto& c : comp) y -= c * metric(M, p, c, y);
                const double nn = vnorm(M, p, y);
                if (nn < 1e-6) continue;
                y *= 1.0 / nn;
                comp.push_back(y);
                tr += metric(M, p, tanaka_curvature(M, p, y, X, X), y);
                ++found;
            }
            CHECK(found == 2 * M.n - 2);
            CHECK(std::fabs(tr - (2.0 * M.n - 2.0) / 4.0) < 1e-8);
        }
    }
    {
        const auto M = ManifoldHandle::heisenberg();
        for (int s = 0; s < 10; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng), Y = random_horizontal(M, p, rng),
                      Z = random_horizontal(M, p, rng);
            CHECK(vnorm(M, p, tanaka_curvature(M, p, X, Y, Z)) < 1e-8);
        }
    }
    // non-horizontal input rejected
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p = random_point(M, rng);
    CHECK_THROWS_AS(tanaka_curvature(M, p, xi(M, p), xi(M, p), xi(M, p)), std::invalid_argument);
}

TEST_CASE("N tensor vanishes on the Sasakian models") {
    // N is the bilinear form on ker eta from the diameter hypotheses
    for (const auto& M : contact_models()) {
        CAPTURE(M.describe());
        SplitMix64 rng(77);
        double worst = 0.0;
        for (int s = 0; s < 25; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            worst = std::fmax(worst, vnorm(M, p, n_tensor(M, p, X)));
        }
        CHECK(worst < 1e-6);
        // bilinearity at zero
        const Vec p = random_point(M, rng);
        CHECK(vnorm(M, p, n_tensor(M, p, Vec(M.ambient_dim()))) < 1e-15);
    }
}

TEST_CASE("tanaka connection: nabla-bar of xi vanishes, torsion identity") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    SplitMix64 rng(19);
    const VecField xif = [M](const Vec& q) { return xi(M, q); };
    double worst = 0.0, worst_torsion = 0.0;
    for (int s = 0; s < 20; ++s) {
        const Vec p = random_point(M, rng);
        const Vec u = random_tangent(M, p, rng);
        worst = std::fmax(worst, vnorm(M, p, tanaka_deriv(M, p, u, xif)));
        // T(X,Y) = g(X, JY) xi for horizontal X, Y
        const Vec X = random_horizontal(M, p, rng), Y = random_horizontal(M, p, rng);
        const auto extX = extend_tangent(M, X), extY = extend_tangent(M, Y);
        auto along = [&](const Vec& dir, const VecField& g) {
            const double nn = norm(dir);
            const Vec ud = dir * (1.0 / nn);
            return fd_central([&](double t) { return g(project_point(M, axpy(t, ud, p))); }) * nn;
        };
        const Vec bracket = tangent_project(M, p, along(X, extY) - along(Y, extX));
        const Vec torsion = tanaka_deriv(M, p, X, extY) - tanaka_deriv(M, p, Y, extX) - bracket;
        const Vec want = xi(M, p) * metric(M, p, X, Jop(M, p, Y));
        worst_torsion = std::fmax(worst_torsion, vnorm(M, p, torsion - want));
    }
    CHECK(worst < 1e-6);
    CHECK(worst_torsion < 1e-5);
    // linearity in u at zero
    const Vec p = random_point(M, rng);
    CHECK(vnorm(M, p, tanaka_deriv(M, p, Vec(4), xif)) < 1e-12);
}

TEST_CASE("reeb orbit lengths and flow") {
    CHECK(std::fabs(reeb_orbit_length(ManifoldHandle::hopf(1, 1, 1)) - 4 * kPi) < 1e-14);
    CHECK(std::fabs(reeb_orbit_length(ManifoldHandle::hopf(2, 1, 1)) - kPi) < 1e-14);
    CHECK(std::fabs(reeb_orbit_length(ManifoldHandle::hopf(1, 2, 1)) - 2 * kPi) < 1e-14);
    CHECK(std::isinf(reeb_orbit_length(ManifoldHandle::heisenberg())));
    CHECK_THROWS_AS(reeb_orbit_length(ManifoldHandle::base(1, 1)), std::invalid_argument);

    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec z{2, 0, 0, 0};
    CHECK(norm(reeb_flow(M, z, 4 * kPi) - z) < 1e-12);
    CHECK(norm(reeb_flow(M, z, 0.0) - z) < 1e-15);
    // the flow is the derivative of xi
    const Vec fd_xi = fd_central([&](double s) { return reeb_flow(M, z, s); });
    CHECK(norm(fd_xi - xi(M, z)) < 1e-10);
    // circle action preserves ambient distances
    SplitMix64 rng(3);
    for (int s = 0; s < 10; ++s) {
        const Vec p = random_point(M, rng), q = random_point(M, rng);
        const double t = rng.uniform(0.0, 10.0);
        CHECK(std::fabs(norm(reeb_flow(M, p, t) - reeb_flow(M, q, t)) - norm(p - q)) < 1e-10);
    }
}

TEST_CASE("rescaling: saturating curvature values scale as k^2") {
    // On hopf(k,m,n) the transverse horizontal planes (<X, JY> = 0) carry
    // sectional curvature k^2/4, and the Tanaka-Webster holomorphic value is
    // k^2; both scale as k^2 times the k = 1 value.
    SplitMix64 rng(41);
    for (double lambda : {0.5, 2.0}) {
        const auto M = ManifoldHandle::hopf(lambda, 1, 2);
        for (int s = 0; s < 10; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            Vec Y = random_horizontal(M, p, rng);
            Y -= X * metric(M, p, X, Y);
            Y -= Jop(M, p, X) * metric(M, p, Jop(M, p, X), Y);
            const double nn = vnorm(M, p, Y);
            if (nn < 1e-3) continue;
            Y *= 1.0 / nn;
            CHECK(std::fabs(sectional(M, p, X, Y) - lambda * lambda * 0.25) < 1e-8);
            const Vec JX = Jop(M, p, X);
            const double tw = metric(M, p, tanaka_curvature(M, p, JX, X, X), JX);
            CHECK(std::fabs(tw - lambda * lambda) < 1e-8);
        }
    }
}

TEST_CASE("quotient helpers") {
    const auto M2 = ManifoldHandle::hopf(1, 2, 1);
    const Vec z{2, 0, 0, 0};
    // the deck image of z under j=1 is -z for m=2
    const Vec dz = deck_transform(M2, z, 1);
    CHECK(norm(dz + z) < 1e-12);
    CHECK(quotient_chord(M2, z, dz * 1.0) < 1e-12);
    CHECK(orbit_chord(M2, z, reeb_flow(M2, z, 1.234)) < 1e-12);
    CHECK(std::fabs(total_volume(ManifoldHandle::hopf(1, 1, 1)) - 16 * kPi * kPi) < 1e-9);
    CHECK(std::fabs(total_volume(ManifoldHandle::hopf(1, 2, 1)) - 8 * kPi * kPi) < 1e-9);
}
