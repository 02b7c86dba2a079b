#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cclab/identities.hpp"

using namespace cclab;

TEST_CASE("full appendix suite passes on the models") {
    // the rescaled kinds exercise the deformation corrections in the
    // connection and curvature formulas
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(1, 1, 2),
                          ManifoldHandle::hopf(2, 1, 1), ManifoldHandle::hopf(0.5, 1, 2),
                          ManifoldHandle::heisenberg()}) {
        CAPTURE(M.describe());
        const auto rep = run_identity_suite(M, {}, 60, 7, 2);
        for (const auto& item : rep.items) {
            CAPTURE(item.id);
            CAPTURE(item.max_residual);
            CHECK(item.pass);
        }
        CHECK(rep.all_pass());
    }
}

TEST_CASE("pinned reference values") {
    // nabla_xi J on hopf(1,1,1) below 1e-6
    const auto rep = run_identity_suite(ManifoldHandle::hopf(1, 1, 1), {"J.5"}, 200, 7);
    REQUIRE(rep.items.size() == 1);
    CHECK(rep.items[0].max_residual < 1e-6);

    // Rc(xi, xi) = 1/2 on hopf(1,1,1); the ambient Gauss computation for the
    // round sphere of radius 2 gives Ric = (dim - 1)/4 = 1/2 in the xi slot
    const auto rep9 = run_identity_suite(ManifoldHandle::hopf(1, 1, 1), {"h.9"}, 50, 7);
    CHECK(rep9.items[0].max_residual < 1e-6);

    // CR residual on heisenberg
    CHECK(cr_residual(ManifoldHandle::heisenberg(), 100, 7) < 1e-6);
}

TEST_CASE("selection subsets reproduce the full-run numbers") {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto full = run_identity_suite(M, {}, 20, 99);
    const auto sub = run_identity_suite(M, {"Rm.2"}, 20, 99);
    double full_val = -1.0;
    for (const auto& it : full.items)
        if (it.id == "Rm.2") full_val = it.max_residual;
    REQUIRE(sub.items.size() == 1);
    CHECK(sub.items[0].max_residual == full_val);
    CHECK_THROWS_AS(run_identity_suite(M, {"nope"}, 5, 1), std::invalid_argument);
}

TEST_CASE("hypothesis margins saturate on the models") {
    // hopf(1,m,n): both conditions hold with equality at k1 = 1,
    // k2 = sqrt(2n-2)/2
    {
        const auto mg = hypothesis_margins(ManifoldHandle::hopf(1, 1, 2), 1.0, std::sqrt(2.0) / 2.0, 200, 7, 2);
        CHECK(std::fabs(mg.margin1) < 1e-6);
        CHECK(std::fabs(mg.margin2) < 1e-6);
    }
    {
        const auto mg = hypothesis_margins(ManifoldHandle::hopf(1, 2, 1), 1.0, 0.0, 100, 7, 2);
        CHECK(std::fabs(mg.margin1) < 1e-6);
        CHECK(std::fabs(mg.margin2) < 1e-6);  // empty trace, matched k2 = 0
    }
    // heisenberg fails condition (1) by exactly k1^2
    {
        const auto mg = hypothesis_margins(ManifoldHandle::heisenberg(), 0.1, 0.0, 100, 7, 2);
        CHECK(std::fabs(mg.margin1 + 0.01) < 1e-6);
    }
    // base(2,1) saturates the symplectic condition (1) with k1 = 2
    {
        const auto mg = hypothesis_margins(ManifoldHandle::base(2, 1), 2.0, 0.0, 100, 7, 2);
        CHECK(std::fabs(mg.margin1) < 1e-5);
    }
}

TEST_CASE("margins scale as k^2") {
    for (double lam : {0.5, 2.0}) {
        const auto mg = hypothesis_margins(ManifoldHandle::hopf(lam, 1, 2), 0.0, 0.0, 60, 11, 2);
        // saturating values are k1^2 = lam^2 and k2^2 = (2n-2) lam^2 / 4
        CHECK(std::fabs(mg.inf_q1 - lam * lam) < 1e-5 * std::fmax(1.0, lam * lam));
        CHECK(std::fabs(mg.inf_q2 - 0.5 * lam * lam) < 1e-5 * std::fmax(1.0, lam * lam));
    }
}

TEST_CASE("cr residual small on all built-ins; xi-slot contributes zero") {
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(2, 1, 2),
                          ManifoldHandle::heisenberg()}) {
        CAPTURE(M.describe());
        CHECK(cr_residual(M, 60, 3) < 1e-5);
        // u = v = xi: both sides vanish identically
        SplitMix64 rng(1);
        const Vec p = random_point(M, rng);
        const Vec xv = xi(M, p);
        const Vec lhs = nabla_J(M, p, xv, xv);
        CHECK(vnorm(M, p, lhs) < 1e-6);
    }
}
