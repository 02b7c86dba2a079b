#include "cclab/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cclab/identities.hpp"
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

double eta_std(const Vec& z, const Vec& u) { return -0.5 * dot(mult_i(z), u); }

Vec reference_orbit_point(const ManifoldHandle& M) {
    Vec c0(M.ambient_dim());
    c0[0] = 2.0;
    return c0;
}

double sphere_surface(int n2m1) {
    // vol(S^{2n-1}): 2 pi for n = 1, 2 pi^2 for n = 2
    return n2m1 == 1 ? 2.0 * kPi : 2.0 * kPi * kPi;
}

// Simpson integral of samples y on the uniform grid [0, i*dt], clipped at cap
double simpson_to(const std::vector<double>& y, double dt, double cap) {
    double acc = 0.0;
    size_t i = 0;
    while ((static_cast<double>(i) + 2.0) * dt <= cap + 1e-15 && i + 2 < y.size()) {
        acc += dt / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
    }
    // trapezoid remainder up to the cap
    while ((static_cast<double>(i) + 1.0) * dt <= cap + 1e-15 && i + 1 < y.size()) {
        acc += 0.5 * dt * (y[i] + y[i + 1]);
        ++i;
    }
    const double left = cap - static_cast<double>(i) * dt;
    if (left > 0 && i + 1 < y.size()) {
        const double frac = left / dt;
        const double yl = y[i] + (y[i + 1] - y[i]) * frac;
        acc += 0.5 * left * (y[i] + yl);
    }
    return acc;
}

// -- Jacobi bundle along a normal geodesic of the reference orbit ------------

struct JacobiBundle {
    std::vector<double> t;
    std::vector<Vec> pos, vel;
    std::vector<std::vector<Vec>> frame;      // (xi, J v, transverse...)
    std::vector<std::vector<Vec>> fields;     // Jacobi fields (R, dirs...)
    std::vector<std::vector<Vec>> cov_rates;  // covariant rates of the fields
    std::vector<Mat> D;                       // field components on the frame
    std::vector<double> detdF;
    double truncation = 0.0;  // first degeneracy of det dF (or the span end)
};

// linearized geodesic acceleration (a = 0 family) for the hopf kinds
Vec accel_linearized(const ManifoldHandle& M, const Vec& p, const Vec& v, const Vec& dp, const Vec& dv,
                     double beta) {
    Vec out = p * (-0.5 * dot(v, dv)) - dp * (0.25 * dot(v, v));
    if (beta != 0.0) {
        const Vec jv = Jop(M, p, v);
        const double deta = -0.5 * (dot(mult_i(dp), v) + dot(mult_i(p), dv));
        Vec dj = mult_i(dv) - dp * (dot(mult_i(v), p) / 4.0) -
                 p * ((dot(mult_i(dv), p) + dot(mult_i(v), dp)) / 4.0);
        out += (jv * deta + dj * eta_std(p, v)) * (2.0 * beta);
    }
    return out;
}

JacobiBundle tube_jacobi(const ManifoldHandle& M, const Vec& c0, const Vec& v0,
                         const std::vector<double>& ts) {
    const double t_max = ts.back();
    if (M.kind != ManifoldKind::hopf)
        throw std::invalid_argument("tube_jacobi: closed Reeb orbits exist on the hopf kinds only");
    const int amb = M.ambient_dim();
    const int d = 2 * M.n;        // frame rows and Jacobi fields
    const int extra = d - 2;      // transported transverse frame rows
    const double beta = (1.0 / (M.k * M.k) - 1.0) / 2.0;

    // initial frame: (xi, J v, transverse horizontal)
    std::vector<Vec> frame0(static_cast<size_t>(d), Vec(amb));
    frame0[0] = xi(M, c0);
    frame0[1] = Jop(M, c0, v0);
    {
        int have = 2;
        for (int axis = 0; axis < amb && have < d; ++axis) {
            Vec c(amb);
            c[axis] = 1.0;
            c = horizontal_project(M, c0, c);
            c -= v0 * metric(M, c0, v0, c);
            for (int j = 1; j < have; ++j)
                c -= frame0[static_cast<size_t>(j)] * metric(M, c0, frame0[static_cast<size_t>(j)], c);
            const double nn = vnorm(M, c0, c);
            if (nn > 1e-6) frame0[static_cast<size_t>(have++)] = c * (1.0 / nn);
        }
        if (have != d) throw std::runtime_error("tube_jacobi: frame completion failed");
    }

    // Jacobi data: field 0 is the Reeb variation, field 1 the J v direction,
    // fields 2.. the transverse direction variations
    std::vector<Vec> J0(static_cast<size_t>(d), Vec(amb)), Jdot0(static_cast<size_t>(d), Vec(amb));
    J0[0] = frame0[0];
    Jdot0[0] = flow::ambient_rate(M, c0, v0, frame0[0], Jop(M, c0, v0) * -0.5);
    for (int f = 1; f < d; ++f) Jdot0[static_cast<size_t>(f)] = frame0[static_cast<size_t>(f)];

    // state: pos, vel, extra frame rows, then (J, Jdot) per field
    const int off_extra = 2 * amb;
    const int off_fields = off_extra + extra * amb;
    const int dim = off_fields + 2 * d * amb;
    std::vector<double> y0(static_cast<size_t>(dim));
    auto put = [&](int off, const Vec& w) {
        for (int i = 0; i < amb; ++i) y0[static_cast<size_t>(off + i)] = w[i];
    };
    put(0, c0);
    put(amb, v0);
    for (int r = 0; r < extra; ++r) put(off_extra + r * amb, frame0[static_cast<size_t>(2 + r)]);
    for (int f = 0; f < d; ++f) {
        put(off_fields + 2 * f * amb, J0[static_cast<size_t>(f)]);
        put(off_fields + (2 * f + 1) * amb, Jdot0[static_cast<size_t>(f)]);
    }

    auto rhs = [&, amb, extra, d](double, const double* y, double* dy) {
        Vec p(amb), v(amb);
        for (int i = 0; i < amb; ++i) {
            p[i] = y[i];
            v[i] = y[amb + i];
        }
        const Vec acc = flow::accel(M, p, v, 0.0);
        for (int i = 0; i < amb; ++i) {
            dy[i] = v[i];
            dy[amb + i] = acc[i];
        }
        // transverse frame rows: derivatives stay inside span{xi, J v}
        const Vec r1 = flow::xi_rate(M, p, v);             // D_t xi
        const Vec r2 = flow::jvel_rate(M, p, v, 0.0);      // D_t (J v)
        const Vec e1 = xi(M, p), e2 = Jop(M, p, v);
        for (int r = 0; r < extra; ++r) {
            Vec w(amb);
            for (int i = 0; i < amb; ++i) w[i] = y[off_extra + r * amb + i];
            Vec Dw = e1 * -metric(M, p, w, r1) + e2 * -metric(M, p, w, r2);
            const Vec rate = flow::ambient_rate(M, p, v, w, Dw);
            for (int i = 0; i < amb; ++i) dy[off_extra + r * amb + i] = rate[i];
        }
        for (int f = 0; f < d; ++f) {
            Vec Jf(amb), Jd(amb);
            for (int i = 0; i < amb; ++i) {
                Jf[i] = y[off_fields + 2 * f * amb + i];
                Jd[i] = y[off_fields + (2 * f + 1) * amb + i];
            }
            const Vec Jacc = accel_linearized(M, p, v, Jf, Jd, beta);
            for (int i = 0; i < amb; ++i) {
                dy[off_fields + 2 * f * amb + i] = Jd[i];
                dy[off_fields + (2 * f + 1) * amb + i] = Jacc[i];
            }
        }
    };

    OdeOptions opts;
    const auto sol = integrate_ode(y0, rhs, 0.0, t_max, ts, opts);
    if (!sol.completed) throw std::runtime_error("tube_jacobi: integration failed");

    JacobiBundle B;
    B.t = sol.t;
    const size_t m = sol.t.size();
    B.pos.resize(m);
    B.vel.resize(m);
    B.frame.assign(m, std::vector<Vec>(static_cast<size_t>(d), Vec(amb)));
    B.fields.assign(m, std::vector<Vec>(static_cast<size_t>(d), Vec(amb)));
    B.cov_rates.assign(m, std::vector<Vec>(static_cast<size_t>(d), Vec(amb)));
    B.D.assign(m, Mat(d, d));
    B.detdF.resize(m);
    for (size_t s = 0; s < m; ++s) {
        const double* y = sol.y[s].data();
        Vec p(amb), v(amb);
        for (int i = 0; i < amb; ++i) {
            p[i] = y[i];
            v[i] = y[amb + i];
        }
        B.pos[s] = p;
        B.vel[s] = v;
        auto& fr = B.frame[s];
        fr[0] = xi(M, p);
        fr[1] = Jop(M, p, v);
        for (int r = 0; r < extra; ++r)
            for (int i = 0; i < amb; ++i) fr[static_cast<size_t>(2 + r)][i] = y[off_extra + r * amb + i];
        for (int f = 0; f < d; ++f) {
            Vec Jf(amb), Jd(amb);
            for (int i = 0; i < amb; ++i) {
                Jf[i] = y[off_fields + 2 * f * amb + i];
                Jd[i] = y[off_fields + (2 * f + 1) * amb + i];
            }
            B.fields[s][static_cast<size_t>(f)] = Jf;
            // covariant rate: tangential correction plus the normal term
            Vec Dv = tangent_project(M, p, Jd);
            if (beta != 0.0)
                Dv -= (Jop(M, p, v) * eta_std(p, Jf) + Jop(M, p, Jf) * eta_std(p, v)) * beta;
            B.cov_rates[s][static_cast<size_t>(f)] = Dv;
            for (int j = 0; j < d; ++j)
                B.D[s](f, j) = metric(M, p, Jf, fr[static_cast<size_t>(j)]);
        }
        B.detdF[s] = determinant(B.D[s]);
    }
    // first degeneracy of the full Jacobian (skip the t = 0 polar zero)
    B.truncation = t_max;
    for (size_t s = 2; s < m; ++s) {
        if (B.detdF[s] <= 0.0) {
            const double t0 = B.t[s - 1], t1 = B.t[s];
            const double f0 = B.detdF[s - 1], f1 = B.detdF[s];
            B.truncation = f1 == f0 ? t1 : t0 + (t1 - t0) * f0 / (f0 - f1);
            break;
        }
    }
    return B;
}

}  // namespace

// -- diameter checks ----------------------------------------------------------

DiameterEstimate diameter_check(const ManifoldHandle& M, DiameterMode mode, int samples, uint64_t seed,
                                const DiameterOptions& opts) {
    if (!M.contact()) throw std::invalid_argument("diameter_check: contact kinds only");
    DiameterEstimate est;
    const auto mg = hypothesis_margins(M, 0.0, 0.0, opts.margin_samples, seed, opts.threads);

    if (mode == DiameterMode::holomorphic) {
        est.margin = mg.inf_q1;
        if (!(mg.inf_q1 > 1e-9)) return est;  // hypothesis fails: not applicable
        est.applicable = true;
        est.k_used = std::sqrt(mg.inf_q1);
        est.bound = 2.0 * kPi / est.k_used;
    } else {
        est.margin = mg.inf_q2;
        if (M.n < 2 || !(mg.inf_q2 > 1e-9)) return est;
        est.applicable = true;
        est.k_used = std::sqrt(mg.inf_q2);
        est.bound = std::sqrt(2.0 * M.n - 2.0) * kPi / est.k_used;
    }

    const double k1 = mode == DiameterMode::holomorphic
                          ? est.k_used
                          : 2.0 * est.k_used / std::sqrt(2.0 * M.n - 2.0);
    est.blowup_times.assign(static_cast<size_t>(samples), 0.0);
    parallel_for(samples, opts.threads, [&](long i) {
        SplitMix64 rng(SplitMix64::substream(seed ^ 0x9e3779b97f4a7c15ULL, static_cast<uint64_t>(i)));
        const Vec p = random_point(M, rng);
        const Vec dir = random_horizontal(M, p, rng);
        const double a = mode == DiameterMode::holomorphic ? rng.uniform(-0.75 * k1, 0.75 * k1) : 0.0;
        const auto st = make_geodesic_state(M, p, dir, a);
        GeodesicRecord geo;
        geo.manifold = M;
        geo.t = {0.0};
        geo.states = {st};
        const auto P = ModelParams::matched(k1, M.n, a);
        const auto tr =
            integrate_riccati_S1(M, geo, model_s1_init(P, opts.t0), opts.t0, est.bound * 1.3, 9);
        est.blowup_times[static_cast<size_t>(i)] =
            tr.blowup_time ? *tr.blowup_time : est.bound * 1.3 + 1.0;
    });
    est.max_blowup = *std::max_element(est.blowup_times.begin(), est.blowup_times.end());
    est.pass = est.max_blowup <= est.bound + 1e-6;

    if (opts.distance_pairs > 0) {
        SplitMix64 rng(SplitMix64::substream(seed ^ 0x3c6ef372fe94f82aULL, 1));
        ShootConfig cfg;
        cfg.direction_samples = 12;
        cfg.a_samples = 15;  // near-fiber pairs need a dense vertical-momentum grid
        cfg.threads = opts.threads;
        for (int i = 0; i < opts.distance_pairs; ++i) {
            const Vec a = random_point(M, rng), b = random_point(M, rng);
            const auto res = cc_distance(M, a, b, cfg);
            if (res.converged)
                est.empirical_max_distance = std::fmax(est.empirical_max_distance, res.distance);
        }
        if (est.empirical_max_distance > est.bound + 2e-4) est.pass = false;
    }
    return est;
}

DiameterEstimate symplectic_conjugate_check(const ManifoldHandle& M, int samples, uint64_t seed,
                                            const DiameterOptions& opts) {
    if (M.kind != ManifoldKind::base)
        throw std::invalid_argument("symplectic_conjugate_check: base kind only");
    DiameterEstimate est;
    const auto mg = hypothesis_margins(M, 0.0, 0.0, opts.margin_samples, seed, opts.threads);
    est.margin = mg.inf_q1;
    if (!(mg.inf_q1 > 1e-9)) return est;
    est.applicable = true;
    est.k_used = std::sqrt(mg.inf_q1);
    est.bound = kPi / est.k_used;

    est.blowup_times.assign(static_cast<size_t>(samples), 0.0);
    if (M.n >= 2) est.trace_blowups.assign(static_cast<size_t>(samples), 0.0);
    parallel_for(samples, opts.threads, [&](long i) {
        SplitMix64 rng(SplitMix64::substream(seed ^ 0xa5a5a5a55a5a5a5aULL, static_cast<uint64_t>(i)));
        const Vec p = random_point(M, rng);
        const Vec dir = random_tangent(M, p, rng);
        const auto st = make_geodesic_state(M, p, dir, 0.0);
        GeodesicRecord geo;
        geo.manifold = M;
        geo.t = {0.0};
        geo.states = {st};
        const auto head = integrate_riccati_symplectic(M, geo, 0, opts.t0, est.bound * 1.4, 9);
        est.blowup_times[static_cast<size_t>(i)] =
            head.blowup_time ? *head.blowup_time : est.bound * 1.4 + 1.0;
        if (M.n >= 2) {
            const double window = 2.0 * est.bound * 1.2;
            const auto tail = integrate_riccati_symplectic(M, geo, 1, opts.t0, window, 9);
            est.trace_blowups[static_cast<size_t>(i)] =
                tail.blowup_time ? *tail.blowup_time : window + 1.0;
        }
    });
    est.max_blowup = *std::max_element(est.blowup_times.begin(), est.blowup_times.end());
    est.pass = est.max_blowup <= est.bound + 1e-6;
    return est;
}

// -- distance to the reference orbit -------------------------------------------

OrbitDistanceSolver::OrbitDistanceSolver(const ManifoldHandle& M, int theta_grid, int t_grid)
    : M_(M), c0_(reference_orbit_point(M)), theta_grid_(theta_grid), t_grid_(t_grid) {
    if (M.kind != ManifoldKind::hopf || M.n != 1)
        throw std::invalid_argument("OrbitDistanceSolver: dimension-3 hopf kinds only");
    basis_ = horizontal_basis(M_, c0_);
    t_max_ = kPi / M.k * 1.02;
    table_.resize(static_cast<size_t>(theta_grid_ * t_grid_));
    OdeOptions opts;
    opts.rtol = 1e-9;
    opts.atol = 1e-11;
    for (int j = 0; j < theta_grid_; ++j) {
        const double th = 2.0 * kPi * j / theta_grid_;
        const Vec v = basis_[0] * std::cos(th) + basis_[1] * std::sin(th);
        const auto rec = integrate_geodesic(M_, make_geodesic_state(M_, c0_, v, 0.0), t_max_, t_grid_, opts);
        for (int i = 0; i < t_grid_; ++i)
            table_[static_cast<size_t>(j * t_grid_ + i)] = rec.states[static_cast<size_t>(i)].position;
    }
}

OrbitDistanceSolver::Result OrbitDistanceSolver::distance(const Vec& x) const {
    int best_j = 0, best_i = 0;
    double best = 1e300;
    for (int j = 0; j < theta_grid_; ++j)
        for (int i = 0; i < t_grid_; ++i) {
            const double g = orbit_chord(M_, table_[static_cast<size_t>(j * t_grid_ + i)], x);
            if (g < best) {
                best = g;
                best_j = j;
                best_i = i;
            }
        }
    OdeOptions opts;
    opts.rtol = 1e-9;
    opts.atol = 1e-11;
    auto objective = [&](const std::vector<double>& q) -> double {
        const double th = q[0];
        const double t = q[1];
        if (t <= 1e-8 || t > t_max_ * 1.2) return 1e3 + std::fabs(t);
        const Vec v = basis_[0] * std::cos(th) + basis_[1] * std::sin(th);
        const auto rec = integrate_geodesic(M_, make_geodesic_state(M_, c0_, v, 0.0), t, 2, opts);
        return orbit_chord(M_, rec.states.back().position, x);
    };
    std::vector<double> q = {2.0 * kPi * best_j / theta_grid_,
                             t_max_ * best_i / (t_grid_ - 1.0)};
    if (q[1] <= 1e-8) q[1] = t_max_ / t_grid_;
    const double gap = nelder_mead(objective, q, 0.05, 70, 1e-10);
    return {q[1], gap};
}

// -- tube volumes ---------------------------------------------------------------

TubeVolumeReport tube_volume(const ManifoldHandle& M, const std::vector<double>& T_grid, int angular,
                             uint64_t seed, const TubeOptions& opts) {
    if (M.kind != ManifoldKind::hopf)
        throw std::invalid_argument("tube_volume: closed Reeb orbits exist on the hopf kinds only");
    if (T_grid.empty()) throw std::invalid_argument("tube_volume: empty grid");
    TubeVolumeReport rep;
    rep.T = T_grid;
    const double T_max = *std::max_element(T_grid.begin(), T_grid.end());
    const Vec c0 = reference_orbit_point(M);
    const auto basis = horizontal_basis(M, c0);
    const int d = 2 * M.n;

    // span slightly past the grid so truncation around pi/k is visible
    const double span = std::fmin(T_max * 1.02 + 1e-3, 1.45 * kPi / M.k);
    const int fine = opts.fine_samples;
    const double dt = span / (fine - 1);

    // direction set on the unit sphere of ker eta at c0
    std::vector<Vec> dirs;
    std::vector<double> weights;
    if (M.n == 1) {
        for (int j = 0; j < angular; ++j) {
            const double th = 2.0 * kPi * j / angular;
            dirs.push_back(basis[0] * std::cos(th) + basis[1] * std::sin(th));
            weights.push_back(2.0 * kPi / angular);
        }
    } else {
        const auto ws = sphere_sample(2 * M.n - 1, angular, SplitMix64::substream(seed, 2));
        for (const auto& w : ws) {
            Vec v(M.ambient_dim());
            for (int i = 0; i < d; ++i) v += basis[static_cast<size_t>(i)] * w[i];
            dirs.push_back(v);
            weights.push_back(sphere_surface(2 * M.n - 1) / angular);
        }
    }

    std::vector<std::vector<double>> per_dir(dirs.size());
    std::vector<double> truncations(dirs.size());
    parallel_for(static_cast<long>(dirs.size()), opts.threads, [&](long j) {
        const auto bundle = tube_jacobi(M, c0, dirs[static_cast<size_t>(j)], linspace(0.0, span, fine));
        truncations[static_cast<size_t>(j)] = bundle.truncation;
        auto dets = bundle.detdF;
        for (auto& x : dets) x = std::fmax(x, 0.0);
        // clip past the first degeneracy
        for (size_t i = 0; i < dets.size(); ++i)
            if (bundle.t[i] > bundle.truncation) dets[i] = 0.0;
        per_dir[static_cast<size_t>(j)] = std::move(dets);
    });
    rep.min_truncation = *std::min_element(truncations.begin(), truncations.end());

    // dimension-3 cut check: compare the realized distance against the ray
    // parameter on a few rays; the truncation is the earlier of the two
    if (M.n == 1) {
        OrbitDistanceSolver solver(M, 32, 48);
        const int rays = std::min<int>(4, static_cast<int>(dirs.size()));
        for (int j = 0; j < rays; ++j) {
            const auto bundle = tube_jacobi(M, c0, dirs[static_cast<size_t>(j)], linspace(0.0, span, 9));
            for (int i = 2; i < 9; ++i) {
                const double t = bundle.t[static_cast<size_t>(i)];
                if (t > truncations[static_cast<size_t>(j)]) break;
                const auto dr = solver.distance(bundle.pos[static_cast<size_t>(i)]);
                if (dr.gap < 1e-4 && dr.distance < t - 3e-3) {
                    // ray stopped minimizing before the conjugate time
                    for (size_t s = 0; s < per_dir[static_cast<size_t>(j)].size(); ++s)
                        if (static_cast<double>(s) * dt > dr.distance) per_dir[static_cast<size_t>(j)][s] = 0.0;
                    rep.min_truncation = std::fmin(rep.min_truncation, dr.distance);
                    break;
                }
            }
        }
    }

    const double len_c = reeb_orbit_length(M);
    const double len_c_model = 4.0 * kPi / (M.k * M.k);
    rep.orbit_length = len_c;
    rep.model_orbit_length = len_c_model;

    const auto P = ModelParams::matched(M.k, M.n);
    std::vector<double> model_dets(static_cast<size_t>(fine));
    const double r_model = kPi / M.k;
    for (int i = 0; i < fine; ++i) {
        const double t = i * dt;
        const double det = t <= r_model ? std::pow(t, 2.0 * M.n - 1.0) * model_detB(P, t) : 0.0;
        model_dets[static_cast<size_t>(i)] = std::fmax(det, 0.0);
    }

    for (double T : T_grid) {
        double acc = 0.0, acc_half = 0.0;
        for (size_t j = 0; j < dirs.size(); ++j) {
            const double part = simpson_to(per_dir[j], dt, std::fmin(T, span));
            acc += weights[j] * part;
            if (j % 2 == 0) acc_half += 2.0 * weights[j] * part;
        }
        const double V = len_c * acc;
        const double V_half = len_c * acc_half;
        const double Vbar = len_c_model * sphere_surface(2 * M.n - 1) * simpson_to(model_dets, dt, T);
        rep.V.push_back(V);
        rep.V_err.push_back(std::fabs(V - V_half) + 1e-9 * std::fabs(V));
        rep.Vbar.push_back(Vbar);
        rep.ratio.push_back(Vbar > 0 ? V / Vbar : 0.0);
        rep.ratio_err.push_back(Vbar > 0 ? rep.V_err.back() / Vbar : 0.0);
    }

    // detected multiplicity from the measured first return of the Reeb flow
    {
        const double period = 4.0 * kPi / (M.k * M.k);
        auto chord = [&](double s) { return quotient_chord(M, reeb_flow(M, c0, s), c0); };
        double first_return = 0.0;
        const int grid = 8192;
        for (int i = 1; i < grid && first_return == 0.0; ++i) {
            const double s0 = 1.05 * period * i / grid;
            if (chord(s0) < chord(1.05 * period * (i - 1) / grid) &&
                chord(s0) <= chord(1.05 * period * (i + 1) / grid)) {
                const auto [smin, val] = golden_min(chord, 1.05 * period * (i - 1) / grid,
                                                    1.05 * period * (i + 1) / grid, 80);
                if (val < opts.hit_radius && smin > 1e-9) first_return = smin;
            }
        }
        if (first_return > 0.0) {
            const double ratio = period / first_return;
            const int m = static_cast<int>(std::lround(ratio));
            if (std::fabs(ratio - m) < 1e-6) rep.detected_m = m;
        }
    }

    // ratio monotone within twice the error estimate
    for (size_t i = 0; i + 1 < rep.ratio.size(); ++i)
        if (rep.ratio[i + 1] > rep.ratio[i] + 2.0 * (rep.ratio_err[i] + rep.ratio_err[i + 1]) + 1e-12)
            rep.ratio_monotone = false;

    // Monte-Carlo oracle in dimension 3
    if (M.n == 1 && opts.mc_samples > 0) {
        OrbitDistanceSolver solver(M, 48, 96);
        const int N = opts.mc_samples;
        std::vector<double> dists(static_cast<size_t>(N));
        const auto pts = sphere_sample(3, N, SplitMix64::substream(seed, 3));
        parallel_for(N, opts.threads, [&](long i) {
            const auto r = solver.distance(pts[static_cast<size_t>(i)] * 2.0);
            dists[static_cast<size_t>(i)] = r.gap < 1e-3 ? r.distance : 1e300;
        });
        const double vol = total_volume(M);
        rep.routes_agree = true;
        for (size_t gi = 0; gi < rep.T.size(); ++gi) {
            long count = 0;
            for (double dd : dists)
                if (dd < rep.T[gi]) ++count;
            const double f = static_cast<double>(count) / N;
            const double vmc = vol * f;
            const double sigma = vol * std::sqrt(std::fmax(f * (1.0 - f), 1.0 / N) / N);
            rep.V_mc.push_back(vmc);
            rep.V_mc_err.push_back(sigma);
            if (std::fabs(vmc - rep.V[gi]) > 3.0 * sigma + 3.0 * rep.V_err[gi]) rep.routes_agree = false;
        }
    }
    return rep;
}

std::vector<Mat> normal_jacobi_B(const ManifoldHandle& M, const Vec& v, const std::vector<double>& ts) {
    if (ts.empty()) throw std::invalid_argument("normal_jacobi_B: empty time grid");
    const Vec c0 = reference_orbit_point(M);
    std::vector<double> grid = ts;
    if (grid.front() > 0.0) grid.insert(grid.begin(), 0.0);
    const auto bundle = tube_jacobi(M, c0, v, grid);
    std::vector<Mat> out;
    const int d = 2 * M.n;
    for (size_t s = 0; s < bundle.t.size(); ++s) {
        const double tt = bundle.t[s];
        if (tt == 0.0 && ts.front() > 0.0) continue;
        Mat B = bundle.D[s];
        if (tt > 0)
            for (int i = 1; i < d; ++i)
                for (int j = 0; j < d; ++j) B(i, j) /= tt;
        out.push_back(B);
    }
    return out;
}

// -- equality diagnostics --------------------------------------------------------

EqualityDiagnostics equality_diagnostics(const ManifoldHandle& M, double k1, uint64_t seed,
                                         int focal_samples, int threads) {
    if (M.kind != ManifoldKind::hopf)
        throw std::invalid_argument("equality_diagnostics: hopf kinds only");
    if (!(k1 > 0)) throw std::invalid_argument("equality_diagnostics: k1 must be positive");
    EqualityDiagnostics diag;
    diag.T = kPi / k1;
    diag.focal_samples = focal_samples;
    const Vec c0 = reference_orbit_point(M);
    const auto basis = horizontal_basis(M, c0);
    const int d = 2 * M.n;
    const double beta = (1.0 / (M.k * M.k) - 1.0) / 2.0;

    const auto ws = sphere_sample(2 * M.n - 1, focal_samples, SplitMix64::substream(seed, 11));
    std::vector<double> shape(static_cast<size_t>(focal_samples)), tang(shape), jinv(shape);
    std::vector<Vec> points(static_cast<size_t>(focal_samples), Vec(M.ambient_dim()));

    parallel_for(focal_samples, threads, [&](long s) {
        Vec v(M.ambient_dim());
        for (int i = 0; i < d; ++i) v += basis[static_cast<size_t>(i)] * ws[static_cast<size_t>(s)][i];
        const auto bundle = tube_jacobi(M, c0, v, linspace(0.0, diag.T, 65));
        const size_t last = bundle.t.size() - 1;
        const Vec x = bundle.pos[last];
        const Vec vel = bundle.vel[last];
        points[static_cast<size_t>(s)] = x;
        const Vec e2 = Jop(M, x, vel);
        const Vec xv = xi(M, x);
        // Reeb tangency: xi has no component on the normal plane (vel, J vel)
        tang[static_cast<size_t>(s)] = std::hypot(metric(M, x, xv, vel), metric(M, x, xv, e2));

        // tangent directions of the focal set: the Reeb field and the images
        // of the transverse direction variations
        std::vector<Vec> tx = {xv};
        for (int f = 2; f < d; ++f) {
            Vec u = bundle.fields[last][static_cast<size_t>(f)];
            const double nn = vnorm(M, x, u);
            if (nn > 1e-9) tx.push_back(u * (1.0 / nn));
        }
        double ji = 0.0;
        for (const auto& u : tx) {
            const Vec ju = Jop(M, x, u);
            ji = std::fmax(ji, std::hypot(metric(M, x, ju, vel), metric(M, x, ju, e2)));
        }
        jinv[static_cast<size_t>(s)] = ji;

        // shape operator: covariant rates of the transverse variation fields
        // vanish at the focal radius, and the normal field rotates inside the
        // normal plane along the Reeb direction of the focal set
        double sh = 0.0;
        for (int f = 2; f < d; ++f)
            sh = std::fmax(sh, vnorm(M, x, bundle.cov_rates[last][static_cast<size_t>(f)]));
        {
            // Reeb-family variation of the normal vector
            const double delta = 1e-4;
            Vec nu_p, nu_m, x_p, x_m;
            for (double sgn : {+1.0, -1.0}) {
                const Vec cs = reeb_flow(M, c0, sgn * delta);
                const double theta = -0.5 * M.k * M.k * sgn * delta;
                Vec vv(M.ambient_dim());
                {  // dPhi_s v is the same complex rotation
                    const double cth = std::cos(theta), sth = std::sin(theta);
                    for (int i = 0; i + 1 < v.size(); i += 2) {
                        vv[i] = cth * v[i] - sth * v[i + 1];
                        vv[i + 1] = sth * v[i] + cth * v[i + 1];
                    }
                }
                const auto rec = integrate_geodesic(M, make_geodesic_state(M, cs, vv, 0.0), diag.T, 2);
                if (sgn > 0) {
                    nu_p = rec.states.back().velocity;
                    x_p = rec.states.back().position;
                } else {
                    nu_m = rec.states.back().velocity;
                    x_m = rec.states.back().position;
                }
            }
            const Vec xdot = (x_p - x_m) * (0.5 / delta);
            Vec Dnu = tangent_project(M, x, (nu_p - nu_m) * (0.5 / delta));
            if (beta != 0.0)
                Dnu -= (Jop(M, x, xdot) * eta_std(x, vel) + Jop(M, x, vel) * eta_std(x, xdot)) * beta;
            // tangential part over the focal tangents
            double t2 = 0.0;
            for (const auto& u : tx) {
                const double c = metric(M, x, Dnu, u);
                t2 += c * c;
            }
            sh = std::fmax(sh, std::sqrt(t2));
        }
        shape[static_cast<size_t>(s)] = sh;
    });

    for (int s = 0; s < focal_samples; ++s) {
        diag.shape_operator_norm = std::fmax(diag.shape_operator_norm, shape[static_cast<size_t>(s)]);
        diag.xi_tangency = std::fmax(diag.xi_tangency, tang[static_cast<size_t>(s)]);
        diag.j_invariance = std::fmax(diag.j_invariance, jinv[static_cast<size_t>(s)]);
    }
    diag.focal_points = points;

    // focal-circle rotation: the speed c* that makes s -> exp(w(s)) constant
    {
        Vec v(M.ambient_dim());
        for (int i = 0; i < d; ++i) v += basis[static_cast<size_t>(i)] * ws[0][i];
        const double delta = 1e-4;
        auto endpoint = [&](double s, double c) {
            const Vec cs = reeb_flow(M, c0, s);
            const double theta = -0.5 * M.k * M.k * s;
            Vec vv(M.ambient_dim());
            const double cth = std::cos(theta), sth = std::sin(theta);
            for (int i = 0; i + 1 < v.size(); i += 2) {
                vv[i] = cth * v[i] - sth * v[i + 1];
                vv[i + 1] = sth * v[i] + cth * v[i + 1];
            }
            const Vec u = vv * std::cos(c * s) + Jop(M, cs, vv) * std::sin(c * s);
            const auto rec = integrate_geodesic(M, make_geodesic_state(M, cs, u, 0.0), diag.T, 2);
            return rec.states.back().position;
        };
        auto drift = [&](double c) {
            return norm(endpoint(delta, c) - endpoint(-delta, c)) / (2.0 * delta);
        };
        const auto [cstar, val] = golden_min(drift, 0.0, 1.3 * k1 * k1, 60);
        diag.rotation_speed = cstar;
        diag.velocity_null_residual = val;
        diag.rotation_period_err = std::fabs(2.0 * kPi / cstar - 4.0 * kPi / (k1 * k1));
    }

    // covering multiplicity: refined returns of the Reeb orbit within one
    // model period
    {
        const double period = 4.0 * kPi / (k1 * k1);
        auto chord = [&](double s) { return quotient_chord(M, reeb_flow(M, c0, s), c0); };
        const int grid = 8192;
        int count = 0;
        std::vector<double> hits;
        for (int i = 0; i < grid; ++i) {
            const double sm = period * i / grid;
            const double s0 = period * (i - 1) / grid;
            const double s1 = period * (i + 1) / grid;
            if (i == 0 || (chord(sm) <= chord(s0) && chord(sm) <= chord(s1))) {
                const auto [smin, val] =
                    i == 0 ? std::make_pair(0.0, 0.0) : golden_min(chord, s0, s1, 80);
                if (val < 1e-5 && (hits.empty() || std::fabs(smin - hits.back()) > 1e-6 * period) &&
                    smin < period * (1.0 - 1e-9)) {
                    hits.push_back(smin);
                    ++count;
                }
            }
        }
        if (count > 0) diag.multiplicity = count;
    }

    // secondary covering count from the direction circle (dimension 3)
    if (M.n == 1) {
        const int tgrid = 512;
        std::vector<Vec> ends(static_cast<size_t>(tgrid), Vec(M.ambient_dim()));
        parallel_for(tgrid, threads, [&](long i) {
            const double th = 2.0 * kPi * i / tgrid;
            const Vec v = basis[0] * std::cos(th) + basis[1] * std::sin(th);
            const auto rec = integrate_geodesic(M, make_geodesic_state(M, c0, v, 0.0), diag.T, 2);
            ends[static_cast<size_t>(i)] = rec.states.back().position;
        });
        int count = 0;
        for (int i = 0; i < tgrid; ++i) {
            const double cur = quotient_chord(M, ends[static_cast<size_t>(i)], ends[0]);
            const double prev = quotient_chord(M, ends[static_cast<size_t>((i + tgrid - 1) % tgrid)], ends[0]);
            const double next = quotient_chord(M, ends[static_cast<size_t>((i + 1) % tgrid)], ends[0]);
            if (cur <= prev && cur <= next && cur < 1e-2) {
                auto f = [&](double th) {
                    const Vec v = basis[0] * std::cos(th) + basis[1] * std::sin(th);
                    const auto rec = integrate_geodesic(M, make_geodesic_state(M, c0, v, 0.0), diag.T, 2);
                    return quotient_chord(M, rec.states.back().position, ends[0]);
                };
                const double lo = 2.0 * kPi * (i - 1) / tgrid, hi = 2.0 * kPi * (i + 1) / tgrid;
                const auto [th, val] = i == 0 ? std::make_pair(0.0, 0.0) : golden_min(f, lo, hi, 40);
                (void)th;
                if (val < 1e-5) ++count;
            }
        }
        diag.exp_circle_count = count;
    }
    return diag;
}

}  // namespace cclab
