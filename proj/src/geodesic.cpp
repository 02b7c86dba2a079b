#include "cclab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cclab/optim.hpp"
#include "cclab/parallel.hpp"

namespace cclab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

Vec mult_i(const Vec& v) {
    Vec r(v.size());
    for (int j = 0; j + 1 < v.size(); j += 2) {
        r[j] = -v[j + 1];
        r[j + 1] = v[j];
    }
    return r;
}

Vec xi_std(const Vec& z) { return mult_i(z) * -0.5; }
double eta_std(const Vec& z, const Vec& u) { return dot(xi_std(z), u); }

struct KindOps {
    const ManifoldHandle& M;
    double beta;  // canonical-variation parameter, 0 at k = 1

    explicit KindOps(const ManifoldHandle& m) : M(m), beta((1.0 / (m.k * m.k) - 1.0) / 2.0) {}

    // ambient acceleration of the geodesic system
    Vec accel(const Vec& p, const Vec& v, double a) const {
        switch (M.kind) {
            case ManifoldKind::hopf: {
                const double coef = a + 2.0 * beta * eta_std(p, v);
                return Jop(M, p, v) * coef - p * (dot(v, v) / 4.0);
            }
            case ManifoldKind::base:
                return p * (-dot(v, v) / 4.0);
            case ManifoldKind::heisenberg: {
                Vec c(3);
                c[0] = v[0];
                c[1] = v[1];
                c[2] = v[2] - p[1] * v[0];
                const double cd0 = a * c[1] + c[1] * c[2];
                const double cd1 = -a * c[0] - c[0] * c[2];
                Vec out(3);
                out[0] = cd0;
                out[1] = cd1;
                out[2] = cd0 * p[1] + c[0] * v[1];
                return out;
            }
        }
        return Vec{};
    }

    // ambient time derivative of a frame vector with prescribed covariant
    // derivative Dv along the curve
    Vec ambient_rate(const Vec& p, const Vec& vel, const Vec& v, const Vec& Dv) const {
        switch (M.kind) {
            case ManifoldKind::hopf: {
                Vec tang = Dv;
                if (beta != 0.0)
                    tang += (Jop(M, p, vel) * eta_std(p, v) + Jop(M, p, v) * eta_std(p, vel)) * beta;
                return tang - p * (dot(v, vel) / 4.0);
            }
            case ManifoldKind::base:
                return Dv - p * (dot(v, vel) / 4.0);
            case ManifoldKind::heisenberg: {
                Vec vc(3), velc(3);
                vc[0] = v[0];
                vc[1] = v[1];
                vc[2] = v[2] - p[1] * v[0];
                velc[0] = vel[0];
                velc[1] = vel[1];
                velc[2] = vel[2] - p[1] * vel[0];
                Vec Dc(3);
                Dc[0] = Dv[0];
                Dc[1] = Dv[1];
                Dc[2] = Dv[2] - p[1] * Dv[0];
                // cdot_k = (Dv)_k - Gamma^k(vel, v)
                Vec cd(3);
                cd[0] = Dc[0] + 0.5 * (velc[1] * vc[2] + velc[2] * vc[1]);
                cd[1] = Dc[1] - 0.5 * (velc[0] * vc[2] + velc[2] * vc[0]);
                cd[2] = Dc[2] + 0.5 * (velc[0] * vc[1] - velc[1] * vc[0]);
                Vec out(3);
                out[0] = cd[0];
                out[1] = cd[1];
                out[2] = cd[0] * p[1] + vc[0] * velc[1] + cd[2];
                return out;
            }
        }
        return Vec{};
    }
};

// covariant rates of the first three frame rows; exact on the Sasakian
// built-ins (h = 0, CR identity)
Vec cov_rate_row0(const ManifoldHandle& M, const Vec& p, const Vec& vel) {
    return Jop(M, p, vel) * -0.5;
}
Vec cov_rate_row2(const ManifoldHandle& M, const Vec& p, const Vec& vel, double a) {
    if (M.kind == ManifoldKind::base) return Vec(p.size());  // Kaehler: J gammadot parallel
    return xi(M, p) * 0.5 - vel * a;
}

}  // namespace

namespace flow {

Vec accel(const ManifoldHandle& M, const Vec& p, const Vec& v, double a) {
    return KindOps(M).accel(p, v, a);
}

Vec ambient_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel, const Vec& v, const Vec& Dv) {
    return KindOps(M).ambient_rate(p, vel, v, Dv);
}

Vec xi_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel) { return cov_rate_row0(M, p, vel); }

Vec jvel_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel, double a) {
    return cov_rate_row2(M, p, vel, a);
}

}  // namespace flow

namespace {

int frame_count(const ManifoldHandle& M) {
    return M.kind == ManifoldKind::base ? 2 * M.n : M.dim();
}

// frame rows 0..2 are field compositions of the geodesic state
void analytic_rows(const ManifoldHandle& M, const Vec& p, const Vec& v, std::vector<Vec>& frame) {
    if (M.kind == ManifoldKind::base) {
        frame[0] = v;
        frame[1] = Jop(M, p, v) * (1.0 / std::sqrt(std::fmax(metric(M, p, Jop(M, p, v), Jop(M, p, v)), 1e-300)));
        return;
    }
    frame[0] = xi(M, p);
    frame[1] = v;
    frame[2] = Jop(M, p, v);
}

int analytic_row_count(const ManifoldHandle& M) { return M.kind == ManifoldKind::base ? 2 : 3; }

}  // namespace

GeodesicState make_geodesic_state(const ManifoldHandle& M, const Vec& p, const Vec& v, double a) {
    if (!on_manifold(M, p, 1e-9)) throw std::invalid_argument("make_geodesic_state: point off manifold");
    GeodesicState s;
    s.position = p;
    Vec vv = M.contact() ? horizontal_project(M, p, v) : tangent_project(M, p, v);
    const double nn = vnorm(M, p, vv);
    if (nn < 1e-12) throw std::invalid_argument("make_geodesic_state: degenerate direction");
    s.velocity = vv * (1.0 / nn);
    s.a = a;

    const int fc = frame_count(M);
    s.frame.assign(static_cast<size_t>(fc), Vec(p.size()));
    analytic_rows(M, p, s.velocity, s.frame);
    // complete with horizontal directions orthogonal to v1, v2 (deterministic)
    int have = analytic_row_count(M);
    for (int axis = 0; axis < M.ambient_dim() && have < fc; ++axis) {
        Vec c(M.ambient_dim());
        c[axis] = 1.0;
        c = horizontal_project(M, p, c);
        for (int j = 0; j < have; ++j) c -= s.frame[static_cast<size_t>(j)] * metric(M, p, s.frame[static_cast<size_t>(j)], c);
        const double cn = vnorm(M, p, c);
        if (cn > 1e-6) s.frame[static_cast<size_t>(have++)] = c * (1.0 / cn);
    }
    if (have != fc) throw std::runtime_error("make_geodesic_state: frame completion failed");
    const int nu = std::max(0, 2 * M.n - 2);
    s.u_rot = Mat::identity(nu);
    return s;
}

namespace {

struct PackedLayout {
    int amb = 0;
    int extra_rows = 0;  // integrated frame rows (index >= analytic count)
    int size() const { return 2 * amb + 1 + extra_rows * amb; }
};

void pack(const PackedLayout& L, const GeodesicState& s, int analytic_rows_n, std::vector<double>& y) {
    y.assign(static_cast<size_t>(L.size()), 0.0);
    for (int i = 0; i < L.amb; ++i) {
        y[static_cast<size_t>(i)] = s.position[i];
        y[static_cast<size_t>(L.amb + i)] = s.velocity[i];
    }
    y[static_cast<size_t>(2 * L.amb)] = s.a;
    for (int r = 0; r < L.extra_rows; ++r)
        for (int i = 0; i < L.amb; ++i)
            y[static_cast<size_t>(2 * L.amb + 1 + r * L.amb + i)] = s.frame[static_cast<size_t>(analytic_rows_n + r)][i];
}

void unpack(const PackedLayout& L, const ManifoldHandle& M, const double* y, GeodesicState& s, bool with_frame) {
    const int amb = L.amb;
    s.position = Vec(amb);
    s.velocity = Vec(amb);
    for (int i = 0; i < amb; ++i) {
        s.position[i] = y[i];
        s.velocity[i] = y[amb + i];
    }
    s.a = y[2 * amb];
    if (with_frame) {
        const int fc = frame_count(M);
        const int arows = analytic_row_count(M);
        s.frame.assign(static_cast<size_t>(fc), Vec(amb));
        analytic_rows(M, s.position, s.velocity, s.frame);
        for (int r = 0; r < L.extra_rows; ++r)
            for (int i = 0; i < amb; ++i)
                s.frame[static_cast<size_t>(arows + r)][i] = y[2 * amb + 1 + r * amb + i];
        const int nu = std::max(0, 2 * M.n - 2);
        s.u_rot = Mat::identity(nu);
    }
}

void validate_start(const ManifoldHandle& M, const GeodesicState& s) {
    PointTangent pt{s.position, {s.velocity}};
    validate_point_tangent(M, pt, 1e-9);
    if (std::fabs(vnorm(M, s.position, s.velocity) - 1.0) > 1e-9)
        throw std::invalid_argument("geodesic: velocity must be g-unit");
    if (M.contact() && std::fabs(eta(M, s.position, s.velocity)) > 1e-9)
        throw std::invalid_argument("geodesic: velocity must be horizontal");
}

GeodesicRecord integrate_core(const ManifoldHandle& M, const GeodesicState& start, double t_max,
                              int samples, const OdeOptions& opts, bool with_frame) {
    validate_start(M, start);
    GeodesicRecord rec;
    rec.manifold = M;
    if (t_max == 0.0) {
        rec.t = {0.0};
        rec.states = {start};
        rec.end_time = 0.0;
        return rec;
    }
    if (t_max < 0.0) throw std::invalid_argument("integrate_geodesic: t_max must be >= 0");

    const KindOps ops(M);
    PackedLayout L{M.ambient_dim(), with_frame ? frame_count(M) - analytic_row_count(M) : 0};
    const int amb = L.amb;
    const int arows = analytic_row_count(M);

    std::vector<double> y0;
    GeodesicState s0 = start;
    if (with_frame && s0.frame.empty()) s0 = make_geodesic_state(M, start.position, start.velocity, start.a);
    pack(L, s0, arows, y0);

    auto rhs = [&](double, const double* y, double* dy) {
        Vec p(amb), v(amb);
        for (int i = 0; i < amb; ++i) {
            p[i] = y[i];
            v[i] = y[amb + i];
        }
        const double a = y[2 * amb];
        const Vec acc = ops.accel(p, v, a);
        for (int i = 0; i < amb; ++i) {
            dy[i] = v[i];
            dy[amb + i] = acc[i];
        }
        dy[2 * amb] = 0.0;  // K-contact: a is a first integral
        if (L.extra_rows > 0) {
            // covariant rates of the analytic rows, used to keep the
            // transverse rows orthogonal to them
            std::vector<Vec> arate;
            std::vector<Vec> arow(static_cast<size_t>(arows), Vec(amb));
            if (M.kind == ManifoldKind::base) {
                arow[0] = v;
                arow[1] = Jop(M, p, v);
                arate = {ops.accel(p, v, a), Vec(amb)};
            } else {
                arow[0] = xi(M, p);
                arow[1] = v;
                arow[2] = Jop(M, p, v);
                arate = {cov_rate_row0(M, p, v), Jop(M, p, v) * a, cov_rate_row2(M, p, v, a)};
            }
            for (int r = 0; r < L.extra_rows; ++r) {
                Vec w(amb);
                for (int i = 0; i < amb; ++i) w[i] = y[2 * amb + 1 + r * amb + i];
                Vec Dw(amb);
                if (M.kind == ManifoldKind::base) {
                    // base-parallel transport of the horizontal lift
                    const double alpha = 0.5 * dot(Jop(M, p, v), w);
                    Vec rate = xi_std(p) * alpha - p * (dot(w, v) / 4.0);
                    for (int i = 0; i < amb; ++i) dy[2 * amb + 1 + r * amb + i] = rate[i];
                    continue;
                }
                for (int j = 0; j < arows; ++j) Dw -= arow[static_cast<size_t>(j)] * metric(M, p, w, arate[static_cast<size_t>(j)]);
                const Vec rate = ops.ambient_rate(p, v, w, Dw);
                for (int i = 0; i < amb; ++i) dy[2 * amb + 1 + r * amb + i] = rate[i];
            }
        }
    };

    OdeOnAccept on_accept;
    if (with_frame && L.extra_rows > 0) {
        on_accept = [&, amb, arows](long step, double, double* y) {
            if (step % 64 != 0) return;
            Vec p(amb), v(amb);
            for (int i = 0; i < amb; ++i) {
                p[i] = y[i];
                v[i] = y[amb + i];
            }
            std::vector<Vec> rows(static_cast<size_t>(frame_count(M)), Vec(amb));
            analytic_rows(M, p, v, rows);
            // modified Gram-Schmidt against the analytic rows and earlier
            // transverse rows; drift is logged before correction
            for (int r = 0; r < L.extra_rows; ++r) {
                Vec w(amb);
                for (int i = 0; i < amb; ++i) w[i] = y[2 * amb + 1 + r * amb + i];
                for (int j = 0; j < arows + r; ++j) {
                    const double c = metric(M, p, rows[static_cast<size_t>(j)], w);
                    rec.reortho_drift = std::fmax(rec.reortho_drift, std::fabs(c));
                    w -= rows[static_cast<size_t>(j)] * c;
                }
                const double nn = vnorm(M, p, w);
                rec.reortho_drift = std::fmax(rec.reortho_drift, std::fabs(nn - 1.0));
                if (nn > 1e-8) w *= 1.0 / nn;
                rows[static_cast<size_t>(arows + r)] = w;
                for (int i = 0; i < amb; ++i) y[2 * amb + 1 + r * amb + i] = w[i];
            }
        };
    }

    const auto ts = linspace(0.0, t_max, samples);
    const auto sol = integrate_ode(y0, rhs, 0.0, t_max, ts, opts, {}, on_accept);
    rec.blew_up = sol.blew_up;
    rec.end_time = sol.end_time;
    rec.t = sol.t;
    rec.states.resize(sol.t.size());
    for (size_t i = 0; i < sol.t.size(); ++i)
        unpack(L, M, sol.y[i].data(), rec.states[i], with_frame);

    for (const auto& st : rec.states) {
        rec.speed_drift = std::fmax(rec.speed_drift, std::fabs(vnorm(M, st.position, st.velocity) - 1.0));
        rec.a_drift = std::fmax(rec.a_drift, std::fabs(st.a - start.a));
    }
    return rec;
}

}  // namespace

GeodesicRecord integrate_geodesic(const ManifoldHandle& M, const GeodesicState& start, double t_max,
                                  int samples, const OdeOptions& opts) {
    return integrate_core(M, start, t_max, samples, opts, false);
}

void transport_frame(const ManifoldHandle& M, GeodesicRecord& record) {
    if (record.t.empty()) throw std::invalid_argument("transport_frame: empty record");
    GeodesicState start = record.states.front();
    if (start.frame.empty()) start = make_geodesic_state(M, start.position, start.velocity, start.a);
    const double t_max = record.t.back();
    GeodesicRecord withf = integrate_core(M, start, t_max, static_cast<int>(record.t.size()), {}, true);
    withf.manifold = M;
    if (withf.reortho_drift > 1e-6)
        throw std::runtime_error("transport_frame: orthonormality drift exceeded 1e-6");

    // derived traces
    withf.H.reserve(withf.states.size());
    withf.Ncomp.reserve(withf.states.size());
    const int fc = frame_count(M);
    for (const auto& st : withf.states) {
        Mat h(fc, fc);
        if (M.contact()) {
            std::vector<Vec> hv(static_cast<size_t>(fc));
            for (int i = 0; i < fc; ++i) hv[static_cast<size_t>(i)] = h_op(M, st.position, st.frame[static_cast<size_t>(i)]);
            for (int i = 0; i < fc; ++i)
                for (int j = 0; j < fc; ++j) h(i, j) = metric(M, st.position, hv[static_cast<size_t>(i)], st.frame[static_cast<size_t>(j)]);
        }
        withf.H.push_back(h);
        const Vec nj = nabla_J(M, st.position, st.velocity, st.velocity);
        Vec nc(std::min(fc, kMaxVec));
        for (int i = 0; i < nc.size(); ++i) nc[i] = metric(M, st.position, nj, st.frame[static_cast<size_t>(i)]);
        withf.Ncomp.push_back(nc);
    }
    record = std::move(withf);
}

DistanceResult cc_distance(const ManifoldHandle& M, const Vec& p, const Vec& q, const ShootConfig& cfg) {
    if (!M.contact()) throw std::invalid_argument("cc_distance: contact kinds only");
    if (norm(p - q) < 1e-12) throw std::invalid_argument("cc_distance: endpoints coincide");
    if (!on_manifold(M, p, 1e-9) || !on_manifold(M, q, 1e-9))
        throw std::invalid_argument("cc_distance: endpoints must lie on the manifold");

    const double a_max = cfg.a_max > 0 ? cfg.a_max : 4.0 * M.k;
    const double t_max = cfg.t_max > 0 ? cfg.t_max : 2.0 * kPi / M.k * 1.15;
    const auto basis = horizontal_basis(M, p);
    const int bdim = static_cast<int>(basis.size());

    auto direction = [&](const std::vector<double>& w) -> std::optional<Vec> {
        Vec v(M.ambient_dim());
        for (int i = 0; i < bdim; ++i) v += basis[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
        const double nn = vnorm(M, p, v);
        if (nn < 1e-8) return std::nullopt;
        return v * (1.0 / nn);
    };

    struct Candidate {
        double gap = 1e30, t = 0.0, a = 0.0;
        std::vector<double> w;
    };

    const auto dirs = sphere_sample(bdim - 1, cfg.direction_samples, SplitMix64::substream(cfg.seed, 17));
    std::vector<Candidate> cands(dirs.size() * static_cast<size_t>(cfg.a_samples));

    OdeOptions shoot_opts;
    shoot_opts.rtol = 1e-10;
    shoot_opts.atol = 1e-12;

    auto run_shot = [&](long idx) {
        const size_t di = static_cast<size_t>(idx) / static_cast<size_t>(cfg.a_samples);
        const int ai = static_cast<int>(idx % cfg.a_samples);
        const double a = cfg.a_samples == 1 ? 0.0 : -a_max + 2.0 * a_max * ai / (cfg.a_samples - 1);
        std::vector<double> w(static_cast<size_t>(bdim));
        for (int i = 0; i < bdim; ++i) w[static_cast<size_t>(i)] = dirs[di][i];
        const auto dir = direction(w);
        if (!dir) return;
        Candidate c;
        c.w = w;
        c.a = a;
        const auto st = make_geodesic_state(M, p, *dir, a);
        const auto rec = integrate_geodesic(M, st, t_max, cfg.coarse_samples, shoot_opts);
        for (size_t i = 1; i < rec.t.size(); ++i) {
            const double g = quotient_chord(M, rec.states[i].position, q);
            if (g < c.gap) {
                c.gap = g;
                c.t = rec.t[i];
            }
        }
        cands[static_cast<size_t>(idx)] = c;
    };
    parallel_for(static_cast<long>(cands.size()), cfg.threads, run_shot);

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.gap < b.gap || (a.gap == b.gap && a.t < b.t);
    });
    // refine the best end-point gaps plus the shortest plausible hits, so a
    // clean but non-minimal witness cannot shadow a shorter one
    std::vector<size_t> picks;
    for (size_t c = 0; c < cands.size() && picks.size() < 4; ++c)
        if (cands[c].gap < 1e29) picks.push_back(c);
    {
        std::vector<size_t> by_t;
        for (size_t c = 0; c < cands.size(); ++c)
            if (cands[c].gap < 0.5) by_t.push_back(c);
        std::sort(by_t.begin(), by_t.end(), [&](size_t a, size_t b) { return cands[a].t < cands[b].t; });
        for (size_t c : by_t) {
            if (picks.size() >= 8) break;
            if (std::find(picks.begin(), picks.end(), c) == picks.end()) picks.push_back(c);
        }
    }

    auto objective = [&](const std::vector<double>& params) -> double {
        std::vector<double> w(params.begin(), params.end() - 2);
        const double a = params[params.size() - 2];
        const double t = params.back();
        if (t <= 1e-6 || t > t_max * 1.5) return 1e3 + std::fabs(t);
        const auto dir = direction(w);
        if (!dir) return 1e3;
        const auto st = make_geodesic_state(M, p, *dir, a);
        const auto rec = integrate_geodesic(M, st, t, 2, shoot_opts);
        if (rec.states.empty() || rec.blew_up) return 1e3;
        return quotient_chord(M, rec.states.back().position, q);
    };

    DistanceResult best;
    best.distance = 1e30;
    for (size_t c : picks) {
        const auto& cand = cands[c];
        if (cand.gap > 1e29) continue;
        std::vector<double> params = cand.w;
        params.push_back(cand.a);
        params.push_back(cand.t);
        const double g = nelder_mead(objective, params, 0.08, cfg.refine_iterations);
        const double t = params.back();
        if (g < cfg.gap_tol) {
            ++best.shots_converged;
            if (t < best.distance) {
                best.distance = t;
                best.gap = g;
                best.converged = true;
                const auto dir = direction({params.begin(), params.end() - 2});
                const auto st = make_geodesic_state(M, p, *dir, params[params.size() - 2]);
                best.witness = integrate_geodesic(M, st, t, 65, shoot_opts);
            }
        }
    }
    if (!best.converged) {
        // report the least-bad shot; callers treat this as non-fatal
        best.distance = cands.front().t;
        best.gap = cands.front().gap;
    }
    return best;
}

}  // namespace cclab
