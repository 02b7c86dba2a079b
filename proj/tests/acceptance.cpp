// Acceptance suite: one pass/fail line per criterion, exit code reflects the
// overall outcome. Runs the whole laboratory end to end at desk scale
// (n = 1 and n = 2).

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cclab/comparison.hpp"
#include "cclab/geodesic.hpp"
#include "cclab/identities.hpp"
#include "cclab/manifold.hpp"
#include "cclab/report.hpp"
#include "cclab/riccati.hpp"
#include "cclab/root.hpp"
#include "cclab/runner.hpp"

using namespace cclab;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
int g_failures = 0;

void line(const std::string& id, bool pass, double value, double tol, const std::string& what) {
    if (!pass) ++g_failures;
    std::printf("[%s] %-4s %-62s value=%.3e tol=%.1e\n", pass ? "PASS" : "FAIL", id.c_str(),
                what.c_str(), value, tol);
    std::fflush(stdout);
}

void check_abs(const std::string& id, double value, double tol, const std::string& what) {
    line(id, std::fabs(value) <= tol, value, tol, what);
}

void check_upper(const std::string& id, double value, double limit, const std::string& what) {
    line(id, value <= limit, value, limit, what);
}

void check_true(const std::string& id, bool ok, const std::string& what) {
    line(id, ok, ok ? 1.0 : 0.0, 1.0, what);
}

double comparison_residual(const ModelParams& P, double t) {
    const Mat S = model_s0(P, t);
    const Mat Sd = model_s0_derivative(P, t);
    const Mat W = comparison_W0(P.a);
    const Mat L = comparison_L0(P.k1, P.a);
    Mat C3(3, 3);
    C3(1, 1) = C3(2, 2) = 1.0;
    return (Sd - W * S - S * W.transposed() + S * C3 * S + L).max_abs();
}

GeodesicRecord seed_record(const ManifoldHandle& M, const Vec& p, const Vec& v, double a) {
    GeodesicRecord geo;
    geo.manifold = M;
    geo.t = {0.0};
    geo.states = {make_geodesic_state(M, p, v, a)};
    return geo;
}

void criterion1() {
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const Vec p{2, 0, 0, 0};
    const Vec v{0, 0, 1, 0};
    const auto rec = integrate_geodesic(M, make_geodesic_state(M, p, v, 0.0), kPi, 129);
    double worst = 0.0;
    for (size_t i = 0; i < rec.t.size(); ++i) {
        const double t = rec.t[i];
        const Vec want{2 * std::cos(t / 2), 0, 2 * std::sin(t / 2), 0};
        worst = std::fmax(worst, norm(rec.states[i].position - want));
    }
    check_abs("C1a", worst, 1e-8, "model geodesic matches (2cos(t/2) z0, 2sin(t/2) z')");

    ShootConfig cfg;
    cfg.threads = 2;
    const auto res = cc_distance(M, p, Vec{0, 0, 2, 0}, cfg);
    check_abs("C1b", res.distance - kPi, 1e-4, "cc_distance((2,0),(0,2)) = pi");
}

void criterion2() {
    double worst_res = 0.0, worst_asym = 0.0;
    for (const auto& [k1, a] : std::vector<std::pair<double, double>>{{1, 0}, {1, 1}, {2, 0.5}}) {
        ModelParams P;
        P.k1 = k1;
        P.a = a;
        P.n = 1;
        const double tb = first_blowup_time(P, BlowupMode::s0);
        for (int i = 0; i < 160; ++i) {
            const double t = 0.05 + (0.95 * tb - 0.05) * i / 159.0;
            worst_res = std::fmax(worst_res, comparison_residual(P, t));
        }
        const double t = 1e-3;
        const Mat S = model_s0(P, t);
        auto rel = [](double got, double want) {
            return std::fabs(got - want) / std::fmax(1.0, std::fabs(want));
        };
        worst_asym = std::fmax(worst_asym, rel(S(0, 0) * t * t * t, 12.0));
        worst_asym = std::fmax(worst_asym, rel(S(0, 1) * t, a));
        worst_asym = std::fmax(worst_asym, rel(S(0, 2) * t * t, 6.0));
        worst_asym = std::fmax(worst_asym, rel(S(1, 1) * t, 1.0));
        worst_asym = std::fmax(worst_asym, rel(S(1, 2), a / 2.0));
        worst_asym = std::fmax(worst_asym, rel(S(2, 2) * t, 4.0));
    }
    check_abs("C2a", worst_res, 1e-8, "closed-form Riccati residual on [0.05, 0.95 blowup]");
    check_abs("C2b", worst_asym, 0.01, "small-t asymptotics match the 12/t^3 matrix");
}

void criterion3() {
    DiameterOptions opts;
    opts.threads = 2;
    opts.margin_samples = 100;
    opts.distance_pairs = 0;
    for (int n : {1, 2}) {
        const auto M = ManifoldHandle::hopf(1, 1, n);
        const auto est = diameter_check(M, DiameterMode::holomorphic, 8, 7, opts);
        check_upper("C3a", est.max_blowup, 2 * kPi + 1e-6,
                    "holomorphic-mode blow-ups on hopf(1,1," + std::to_string(n) + ") within 2 pi");
    }
    const auto est = diameter_check(ManifoldHandle::hopf(1, 1, 2), DiameterMode::trace, 6, 7, opts);
    check_upper("C3b", est.max_blowup, 2 * kPi + 1e-6,
                "trace-mode blow-ups on hopf(1,1,2) within sqrt(2n-2) pi / k2");
    const double root =
        find_root([](double t) { return 2 - 2 * std::cos(t) - t * std::sin(t); }, kPi, 3 * kPi);
    check_abs("C3c", root - 2 * kPi, 1e-9, "first zero of 2 - 2cos t - t sin t at 2 pi");
}

void criterion4() {
    const auto P = ModelParams::matched(1.0, 1);
    check_abs("C4a", first_blowup_time(P, BlowupMode::jacobi) - kPi, 1e-8,
              "first zero of det B at pi");
    const auto M = ManifoldHandle::hopf(1, 1, 1);
    const auto basis = horizontal_basis(M, Vec{2, 0, 0, 0});
    const Vec v = basis[0] * std::cos(0.9) + basis[1] * std::sin(0.9);
    const auto ts = linspace(0.05, 3.0, 60);
    const auto Bs = normal_jacobi_B(M, v, ts);
    double worst = 0.0;
    for (size_t i = 0; i < ts.size(); ++i)
        worst = std::fmax(worst, (Bs[i] - model_B_orbit(P, ts[i])).max_abs());
    check_abs("C4b", worst, 1e-6, "integrated Jacobi matrix matches the closed form on [0.05, 3]");
}

void criterion5() {
    double worst1 = 0.0, worst2 = 0.0, worstN = 0.0;
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(1, 2, 1),
                          ManifoldHandle::hopf(1, 1, 2)}) {
        const double k2 = std::sqrt(std::fmax(0.0, 2.0 * M.n - 2.0)) / 2.0;
        const auto mg = hypothesis_margins(M, 1.0, k2, 200, 7, 2);
        worst1 = std::fmax(worst1, std::fabs(mg.margin1));
        worst2 = std::fmax(worst2, std::fabs(mg.margin2));
        SplitMix64 rng(11);
        for (int s = 0; s < 200; ++s) {
            const Vec p = random_point(M, rng);
            const Vec X = random_horizontal(M, p, rng);
            worstN = std::fmax(worstN, vnorm(M, p, n_tensor(M, p, X)));
        }
    }
    check_abs("C5a", worst1, 1e-5, "margin1 saturates on hopf(1,m,n)");
    check_abs("C5b", worst2, 1e-5, "margin2 saturates on hopf(1,m,n)");
    check_abs("C5c", worstN, 1e-6, "N tensor vanishes on the models");
}

void criterion6() {
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(0.1 + (kPi - 0.2) * i / 7.0);
    TubeOptions opts;
    opts.threads = 2;
    opts.mc_samples = 2000;
    {
        const auto rep = tube_volume(ManifoldHandle::hopf(1, 1, 1), grid, 32, 7, opts);
        double dev = 0.0;
        for (double r : rep.ratio) dev = std::fmax(dev, std::fabs(r - 1.0));
        check_abs("C6a", dev, 1e-3, "V/Vbar = 1 on hopf(1,1,1) across [0.1, pi-0.1]");
        check_true("C6b", rep.ratio_monotone, "ratio non-increasing within 2 sigma");
        check_true("C6c", rep.routes_agree, "Jacobian route within 3 sigma of the MC oracle");
    }
    {
        const auto rep = tube_volume(ManifoldHandle::hopf(1, 2, 1), grid, 32, 7, opts);
        check_true("C6d", rep.detected_m.has_value() && *rep.detected_m == 2,
                   "detected multiplicity 2 on hopf(1,2,1)");
        double dev = 0.0;
        for (double r : rep.ratio) dev = std::fmax(dev, std::fabs(r - 0.5));
        check_abs("C6e", dev, 1e-2, "V/Vbar = 1/2 on hopf(1,2,1)");
        check_true("C6f", rep.ratio_monotone && rep.routes_agree,
                   "quotient run: monotone ratio, routes agree");
    }
}

void criterion7() {
    for (int m : {1, 2, 3}) {
        const auto M = ManifoldHandle::hopf(1, m, 1);
        const auto diag = equality_diagnostics(M, 1.0, 7, m == 1 ? 50 : 16, 2);
        check_abs("C7a", diag.shape_operator_norm, 1e-6,
                  "focal shape operator vanishes (m = " + std::to_string(m) + ")");
        check_abs("C7b", std::fmax(diag.xi_tangency, diag.j_invariance), 1e-6,
                  "Reeb tangency and J-invariance of the focal set");
        check_true("C7c", diag.multiplicity.has_value() && *diag.multiplicity == m,
                   "covering multiplicity equals " + std::to_string(m));
    }
}

void criterion8() {
    DiameterOptions opts;
    opts.threads = 2;
    opts.margin_samples = 80;
    {
        const auto est = symplectic_conjugate_check(ManifoldHandle::base(1, 2), 8, 7, opts);
        double worst = 0.0;
        for (double b : est.blowup_times) worst = std::fmax(worst, std::fabs(b - kPi));
        check_abs("C8a", worst, 1e-4, "base(1,2): conjugate times at pi");
    }
    {
        const auto est = symplectic_conjugate_check(ManifoldHandle::base(2, 1), 8, 7, opts);
        double worst = 0.0;
        for (double b : est.blowup_times) worst = std::fmax(worst, std::fabs(b - kPi / 2));
        check_abs("C8b", worst, 1e-4, "base(2,1): conjugate times at pi/2");
    }
}

void criterion9() {
    for (const auto& M : {ManifoldHandle::hopf(1, 1, 1), ManifoldHandle::hopf(1, 1, 2),
                          ManifoldHandle::heisenberg()}) {
        const auto rep = run_identity_suite(M, {}, 200, 7, 2);
        double worst_rel = 0.0;
        for (const auto& it : rep.items)
            worst_rel = std::fmax(worst_rel, it.max_residual / it.tolerance);
        check_true("C9", rep.all_pass(), "appendix suite on " + M.describe() +
                                             " (worst residual/tol " + std::to_string(worst_rel) + ")");
    }
}

void criterion10() {
    double worst = 0.0;
    for (double k1 : {0.1, 0.5, 1.0}) {
        const auto mg = hypothesis_margins(ManifoldHandle::heisenberg(), k1, 0.0, 150, 7, 2);
        worst = std::fmax(worst, std::fabs(mg.margin1 + k1 * k1));
    }
    check_abs("C10a", worst, 1e-6, "heisenberg margin1 = -k1^2 for every k1");

    const auto M = ManifoldHandle::heisenberg();
    const auto geo = seed_record(M, Vec{0, 0, 0}, Vec{1, 0, 0}, 0.0);
    const auto tr = integrate_riccati_S1(M, geo, model_s0_flat(0.05), 0.05, 20.0, 41);
    check_true("C10b", !tr.blowup_time.has_value(), "heisenberg Riccati runs to t = 20 without blow-up");
}

void criterion11() {
    RunConfig cfg;
    cfg.command = "identities";
    cfg.manifold = "hopf:k=1,m=1,n=1";
    cfg.samples = 25;
    cfg.seed = 20240817;
    cfg.threads = 2;
    const auto a = run_command(cfg);
    const auto b = run_command(cfg);
    bool same = report_json(a.report) == report_json(b.report);

    RunConfig tcfg;
    tcfg.command = "tube";
    tcfg.manifold = "hopf:k=1,m=2,n=1";
    tcfg.t_max = 2.2;
    tcfg.grid = 4;
    tcfg.angular = 12;
    tcfg.mc_samples = 200;
    tcfg.seed = 5;
    tcfg.threads = 2;
    const auto c = run_command(tcfg);
    const auto d = run_command(tcfg);
    same = same && report_json(c.report) == report_json(d.report);
    check_true("C11", same, "re-running identical configs reproduces byte-identical reports");
}

}  // namespace

int main() {
    std::printf("acceptance suite (desk scale: n in {1,2})\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance check(s) FAILED\n", g_failures);
    return 1;
}
