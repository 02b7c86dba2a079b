#include "cclab/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "cclab/comparison.hpp"
#include "cclab/geodesic.hpp"
#include "cclab/identities.hpp"
#include "cclab/manifold.hpp"
#include "cclab/parallel.hpp"
#include "cclab/riccati.hpp"

namespace cclab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

nlohmann::ordered_json config_json(const RunConfig& c, int threads) {
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["manifold"] = c.manifold;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["threads"] = threads;
    j["format"] = c.format;
    j["a"] = c.a;
    j["t_max"] = c.t_max;
    j["k1"] = c.k1;
    j["k2"] = c.k2;
    j["grid"] = c.grid;
    j["mc_samples"] = c.mc_samples;
    j["angular"] = c.angular;
    j["focal"] = c.focal;
    j["tol_scale"] = c.tol_scale;
    j["mode"] = c.mode;
    j["selection"] = c.selection;
    return j;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// canonical start for the geodesic/riccati subcommands: the reference point
// with the first horizontal axis direction
GeodesicState reference_state(const ManifoldHandle& M, double a) {
    Vec p(M.ambient_dim());
    if (M.kind == ManifoldKind::heisenberg) {
        Vec v{1, 0, 0};
        return make_geodesic_state(M, p, v, a);
    }
    p[0] = 2.0;
    Vec v(M.ambient_dim());
    v[2] = 1.0;
    return make_geodesic_state(M, p, v, a);
}

void run_identities(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    const auto suite = run_identity_suite(M, split_csv(c.selection), c.samples, c.seed, threads);
    for (const auto& item : suite.items)
        rep.add("identity." + item.id, item.max_residual, item.tolerance * c.tol_scale,
                item.max_residual <= item.tolerance * c.tol_scale,
                std::to_string(item.samples) + " samples");
}

void run_hypotheses(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    const double k1 = c.k1 > 0 ? c.k1 : M.k;
    const double k2 = c.k2 >= 0 ? c.k2 : std::sqrt(std::fmax(0.0, 2.0 * M.n - 2.0)) * k1 / 2.0;
    const auto mg = hypothesis_margins(M, k1, k2, c.samples, c.seed, threads);
    const double tol = 1e-5 * c.tol_scale;
    rep.add("hypotheses.margin1", mg.margin1, tol, mg.margin1 >= -tol, "inf holomorphic-type quantity minus k1^2");
    rep.add("hypotheses.margin2", mg.margin2, tol, mg.margin2 >= -tol, "inf trace-type quantity minus k2^2");
    rep.add("hypotheses.n_tensor", cr_residual(M, std::min(c.samples, 100), c.seed, threads),
            1e-5 * c.tol_scale, true, "CR defect; informational");
    rep.checks.back().pass = rep.checks.back().value <= rep.checks.back().tolerance;
}

void run_geodesic(const RunConfig& c, const ManifoldHandle& M, Report& rep) {
    const auto st = reference_state(M, c.a);
    auto rec = integrate_geodesic(M, st, c.t_max, std::max(2, c.grid * 16 + 1));
    transport_frame(M, rec);
    rep.add_abs("geodesic.speed_drift", rec.speed_drift, 1e-8 * c.tol_scale);
    rep.add_abs("geodesic.a_drift", rec.a_drift, 1e-8 * c.tol_scale);
    double gram = 0.0;
    for (const auto& s : rec.states)
        for (size_t i = 0; i < s.frame.size(); ++i)
            for (size_t j = 0; j <= i; ++j)
                gram = std::fmax(gram, std::fabs(metric(M, s.position, s.frame[i], s.frame[j]) -
                                                 (i == j ? 1.0 : 0.0)));
    rep.add_abs("geodesic.frame_orthonormality", gram, 1e-8 * c.tol_scale);

    Series ser;
    ser.name = "geodesic";
    ser.columns = {"t"};
    const int amb = M.ambient_dim();
    for (int i = 0; i < amb; ++i) ser.columns.push_back("x" + std::to_string(i));
    for (int i = 0; i < amb; ++i) ser.columns.push_back("v" + std::to_string(i));
    ser.columns.push_back("a");
    for (size_t s = 0; s < rec.t.size(); ++s) {
        std::vector<double> row = {rec.t[s]};
        for (int i = 0; i < amb; ++i) row.push_back(rec.states[s].position[i]);
        for (int i = 0; i < amb; ++i) row.push_back(rec.states[s].velocity[i]);
        row.push_back(rec.states[s].a);
        ser.rows.push_back(std::move(row));
    }
    rep.series.push_back(std::move(ser));
}

void run_riccati(const RunConfig& c, const ManifoldHandle& M, Report& rep) {
    const double t0 = 0.1;
    const double t1 = std::fmax(c.t_max, t0 + 0.5);
    const auto st = reference_state(M, c.a);
    GeodesicRecord geo;
    geo.manifold = M;
    geo.t = {0.0};
    geo.states = {st};

    const bool heis = M.kind == ManifoldKind::heisenberg;
    ModelParams P;
    P.k1 = M.contact() && !heis ? M.k : 1.0;
    P.a = c.a;
    P.n = M.n;
    P.k2 = std::sqrt(std::fmax(0.0, 2.0 * M.n - 2.0)) * P.k1 / 2.0;
    const Mat init = heis ? model_s0_flat(t0) : model_s1_init(P, t0);
    const auto tr = integrate_riccati_S1(M, geo, init, t0, t1, std::max(2, c.grid * 8 + 1));

    double model_gap = 0.0;
    for (size_t i = 0; i < tr.t.size(); ++i) {
        const Mat want = heis ? model_s0_flat(tr.t[i]) : model_s1_init(P, tr.t[i]);
        model_gap = std::fmax(model_gap, (tr.S[i] - want).max_abs());
    }
    rep.add_abs("riccati.model_match", model_gap, 1e-6 * c.tol_scale,
                heis ? "flat closed form" : "point comparison closed form");
    rep.add_abs("riccati.symmetry_drift", tr.max_symmetry_drift, 1e-9 * c.tol_scale);
    if (!heis) {
        const double tb_model = first_blowup_time(P, BlowupMode::s0);
        if (tr.blowup_time)
            rep.add_abs("riccati.blowup_time_error", *tr.blowup_time - tb_model, 1e-2 * c.tol_scale,
                        "numerical vs closed form");
        else
            rep.add("riccati.no_blowup_within_span", t1, tb_model, t1 < tb_model,
                    "span ends before the closed-form singularity");
    } else {
        rep.add("riccati.no_blowup", tr.blowup_time ? *tr.blowup_time : 0.0, 0.0,
                !tr.blowup_time.has_value(), "flat comparison never degenerates");
    }

    Series ser;
    ser.name = "riccati";
    ser.columns = {"t"};
    const int d = tr.S.empty() ? 0 : tr.S[0].rows();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            ser.columns.push_back("S" + std::to_string(i) + std::to_string(j));
    for (size_t s = 0; s < tr.t.size(); ++s) {
        std::vector<double> row = {tr.t[s]};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) row.push_back(tr.S[s](i, j));
        ser.rows.push_back(std::move(row));
    }
    rep.series.push_back(std::move(ser));
}

void run_diameter(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    DiameterOptions opts;
    opts.threads = threads;
    opts.margin_samples = std::min(c.samples, 200);
    const auto mode = c.mode == "trace" ? DiameterMode::trace : DiameterMode::holomorphic;
    const auto est = diameter_check(M, mode, std::max(1, c.samples / 25), c.seed, opts);
    rep.add("diameter.applicable", est.margin, 0.0, true,
            est.applicable ? "hypothesis margin positive" : "not applicable: hypothesis margin vanishes");
    if (!est.applicable) return;
    rep.add_upper("diameter.max_blowup", est.max_blowup, est.bound + 1e-6 * c.tol_scale,
                  "bound " + std::to_string(est.bound));
    if (est.empirical_max_distance > 0)
        rep.add_upper("diameter.empirical_max_distance", est.empirical_max_distance,
                      est.bound + 2e-4 * c.tol_scale);
    Series ser;
    ser.name = "blowups";
    ser.columns = {"index", "blowup_time"};
    for (size_t i = 0; i < est.blowup_times.size(); ++i)
        ser.rows.push_back({static_cast<double>(i), est.blowup_times[i]});
    rep.series.push_back(std::move(ser));
}

void run_symplectic(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    DiameterOptions opts;
    opts.threads = threads;
    opts.margin_samples = std::min(c.samples, 200);
    const auto est = symplectic_conjugate_check(M, std::max(1, c.samples / 25), c.seed, opts);
    rep.add("symplectic.applicable", est.margin, 0.0, true,
            est.applicable ? "hypothesis margin positive" : "not applicable: hypothesis margin vanishes");
    if (!est.applicable) return;
    rep.add_upper("symplectic.max_conjugate_time", est.max_blowup, est.bound + 1e-6 * c.tol_scale,
                  "bound " + std::to_string(est.bound));
    double worst = 0.0;
    for (double b : est.blowup_times) worst = std::fmax(worst, std::fabs(b - est.bound));
    rep.add_abs("symplectic.conjugate_time_spread", worst, 1e-4 * c.tol_scale,
                "distance of each conjugate time from the bound");
    Series ser;
    ser.name = "conjugate_times";
    ser.columns = {"index", "head_block", "trace_block"};
    for (size_t i = 0; i < est.blowup_times.size(); ++i)
        ser.rows.push_back({static_cast<double>(i), est.blowup_times[i],
                            i < est.trace_blowups.size() ? est.trace_blowups[i] : 0.0});
    rep.series.push_back(std::move(ser));
}

void run_tube(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    std::vector<double> grid;
    const double lo = 0.1;
    const int count = std::max(2, c.grid);
    for (int i = 0; i < count; ++i) grid.push_back(lo + (c.t_max - lo) * i / (count - 1));
    TubeOptions opts;
    opts.threads = threads;
    opts.mc_samples = M.n == 1 ? c.mc_samples : 0;
    const auto tube = tube_volume(M, grid, c.angular, c.seed, opts);

    rep.add("tube.detected_m", tube.detected_m ? *tube.detected_m : -1.0, 0.0,
            tube.detected_m.has_value(), "len(model orbit) / len(orbit)");
    if (tube.detected_m)
        rep.add("tube.m_matches_quotient", *tube.detected_m, 0.0, *tube.detected_m == M.m,
                "expected " + std::to_string(M.m));
    double ratio_dev = 0.0;
    for (double r : tube.ratio) ratio_dev = std::fmax(ratio_dev, std::fabs(r - 1.0 / M.m));
    rep.add_abs("tube.ratio_deviation", ratio_dev, (M.m == 1 ? 1e-3 : 1e-2) * c.tol_scale,
                "against 1/m on the model family");
    rep.add("tube.ratio_monotone", tube.ratio_monotone ? 1.0 : 0.0, 0.0, tube.ratio_monotone,
            "non-increasing within twice the error estimate");
    if (!tube.V_mc.empty())
        rep.add("tube.routes_agree", tube.routes_agree ? 1.0 : 0.0, 0.0, tube.routes_agree,
                "Jacobian route vs Monte-Carlo oracle within 3 sigma");

    Series ser;
    ser.name = "tube";
    ser.columns = {"T", "V", "V_err", "V_model", "ratio", "ratio_err"};
    const bool mc = !tube.V_mc.empty();
    if (mc) {
        ser.columns.push_back("V_mc");
        ser.columns.push_back("V_mc_err");
    }
    for (size_t i = 0; i < tube.T.size(); ++i) {
        std::vector<double> row = {tube.T[i], tube.V[i],    tube.V_err[i],
                                   tube.Vbar[i], tube.ratio[i], tube.ratio_err[i]};
        if (mc) {
            row.push_back(tube.V_mc[i]);
            row.push_back(tube.V_mc_err[i]);
        }
        ser.rows.push_back(std::move(row));
    }
    rep.series.push_back(std::move(ser));
}

void run_equality(const RunConfig& c, const ManifoldHandle& M, int threads, Report& rep) {
    const double k1 = c.k1 > 0 ? c.k1 : M.k;
    const auto diag = equality_diagnostics(M, k1, c.seed, c.focal, threads);
    rep.add_abs("equality.shape_operator", diag.shape_operator_norm, 1e-6 * c.tol_scale);
    rep.add_abs("equality.xi_tangency", diag.xi_tangency, 1e-6 * c.tol_scale);
    rep.add_abs("equality.j_invariance", diag.j_invariance, 1e-6 * c.tol_scale);
    rep.add_abs("equality.velocity_null", diag.velocity_null_residual, 1e-6 * c.tol_scale);
    rep.add_abs("equality.rotation_period", diag.rotation_period_err, 1e-4 * c.tol_scale,
                "one focal rotation per Reeb period");
    rep.add("equality.multiplicity", diag.multiplicity ? *diag.multiplicity : -1.0, 0.0,
            diag.multiplicity.has_value() && *diag.multiplicity == M.m,
            "expected " + std::to_string(M.m));
    Series ser;
    ser.name = "focal_points";
    ser.columns = {"index"};
    for (int i = 0; i < M.ambient_dim(); ++i) ser.columns.push_back("x" + std::to_string(i));
    for (size_t i = 0; i < diag.focal_points.size(); ++i) {
        std::vector<double> row = {static_cast<double>(i)};
        for (int j = 0; j < M.ambient_dim(); ++j) row.push_back(diag.focal_points[i][j]);
        ser.rows.push_back(std::move(row));
    }
    rep.series.push_back(std::move(ser));
}

}  // namespace

uint64_t default_seed_from_env() {
    if (const char* env = std::getenv("CCLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("CCLAB_SEED must be an unsigned integer");
        }
    }
    return 7;
}

RunOutcome run_command(const RunConfig& cfg) {
    RunOutcome out;
    const int threads = cfg.threads > 0 ? cfg.threads : default_threads();
    out.report.config = config_json(cfg, threads);

    const auto M = ManifoldHandle::parse(cfg.manifold);
    if (cfg.samples < 1) throw std::invalid_argument("samples must be positive");
    if (!(cfg.t_max > 0)) throw std::invalid_argument("t-max must be positive");

    if (cfg.command == "identities") {
        run_identities(cfg, M, threads, out.report);
    } else if (cfg.command == "hypotheses") {
        run_hypotheses(cfg, M, threads, out.report);
    } else if (cfg.command == "geodesic") {
        run_geodesic(cfg, M, out.report);
    } else if (cfg.command == "riccati") {
        run_riccati(cfg, M, out.report);
    } else if (cfg.command == "diameter") {
        run_diameter(cfg, M, threads, out.report);
    } else if (cfg.command == "symplectic") {
        run_symplectic(cfg, M, threads, out.report);
    } else if (cfg.command == "tube") {
        run_tube(cfg, M, threads, out.report);
    } else if (cfg.command == "equality") {
        run_equality(cfg, M, threads, out.report);
    } else {
        throw std::invalid_argument("unknown subcommand: " + cfg.command);
    }
    out.exit_code = out.report.all_pass() ? 0 : 1;
    return out;
}

}  // namespace cclab
