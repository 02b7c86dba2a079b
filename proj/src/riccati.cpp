#include "cclab/riccati.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "cclab/root.hpp"

namespace cclab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

double factorial_tbl(int k) {
    static const auto tbl = [] {
        std::array<double, 50> f{};
        f[0] = 1.0;
        for (int i = 1; i < 50; ++i) f[static_cast<size_t>(i)] = f[static_cast<size_t>(i - 1)] * i;
        return f;
    }();
    return tbl[static_cast<size_t>(k)];
}

// s(x) = 2 - 2 cos x - x sin x = sum_{k>=2} (-1)^k (2k-2) x^{2k} / (2k)!
// The direct form loses ~10 digits below x ~ 0.5, which would wreck the
// 12/t^3 entries; the series branch keeps full precision there.
template <class T>
T s_fun(T x) {
    using std::abs;
    using std::cos;
    using std::sin;
    if (abs(x) < 0.5) {
        T sum{};
        const T x2 = x * x;
        T pw = x2 * x2;
        for (int k = 2; k < 24; ++k) {
            sum += pw * ((k % 2 == 0 ? 1.0 : -1.0) * (2.0 * k - 2.0) / factorial_tbl(2 * k));
            pw *= x2;
        }
        return sum;
    }
    return 2.0 - 2.0 * cos(x) - x * sin(x);
}

// 2 a^2 (1 - cos x) + k1^2 x sin x
template <class T>
T num00(T x, double k1sq, double asq) {
    using std::abs;
    using std::cos;
    using std::sin;
    if (abs(x) < 0.5) {
        T sum{};
        const T x2 = x * x;
        T pw = x2;
        for (int k = 1; k < 24; ++k) {
            sum += pw * ((k % 2 == 0 ? -1.0 : 1.0) * (2.0 * asq + 2.0 * k * k1sq) / factorial_tbl(2 * k));
            pw *= x2;
        }
        return sum;
    }
    return 2.0 * asq - 2.0 * asq * cos(x) + k1sq * x * sin(x);
}

// 2 c1^2 - 2 + 2 (1 - c1^2) cos x + x sin x
template <class T>
T num02(T x, double c1sq) {
    using std::abs;
    using std::cos;
    using std::sin;
    if (abs(x) < 0.5) {
        T sum{};
        const T x2 = x * x;
        T pw = x2;
        for (int k = 1; k < 24; ++k) {
            sum += pw * ((k % 2 == 0 ? -1.0 : 1.0) * (2.0 * k - 2.0 + 2.0 * c1sq) / factorial_tbl(2 * k));
            pw *= x2;
        }
        return sum;
    }
    return 2.0 * c1sq - 2.0 + 2.0 * (1.0 - c1sq) * cos(x) + x * sin(x);
}

// sin x - x cos x
template <class T>
T num22(T x) {
    using std::abs;
    using std::cos;
    using std::sin;
    if (abs(x) < 0.5) {
        T sum{};
        const T x2 = x * x;
        T pw = x2 * x;
        for (int k = 1; k < 24; ++k) {
            sum += pw * ((k % 2 == 0 ? -1.0 : 1.0) * (2.0 * k) / factorial_tbl(2 * k + 1));
            pw *= x2;
        }
        return sum;
    }
    return sin(x) - x * cos(x);
}

// entries 00, 01, 02, 11, 12, 22 of the point comparison solution
template <class T>
std::array<T, 6> s0_entries(const ModelParams& P, T t) {
    const double c1 = P.c1();
    const T x = t * c1;
    const T s = s_fun(x);
    std::array<T, 6> e{};
    e[0] = num00(x, P.k1 * P.k1, P.a * P.a) / (t * s);
    e[1] = T{1.0} * (P.a) / t;
    e[2] = num02(x, c1 * c1) / (2.0 * s);
    e[3] = T{1.0} / t;
    e[4] = T{P.a / 2.0};
    e[5] = c1 * num22(x) / s;
    return e;
}

double sinc(double x) {
    if (std::fabs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// (1 - cos x) / x^2 via the half-angle form, stable for all x
double versinc2(double x) {
    if (std::fabs(x) < 1e-8) return 0.5;
    const double h = std::sin(0.5 * x);
    return 2.0 * h * h / (x * x);
}

}  // namespace

double ModelParams::c1() const { return std::hypot(k1, a); }

double ModelParams::c() const {
    if (n < 2) return k1 / 2.0;  // matched value; the transverse block is empty anyway
    return k2 / std::sqrt(2.0 * n - 2.0);
}

ModelParams ModelParams::matched(double k1, int n, double a) {
    ModelParams P;
    P.k1 = k1;
    P.n = n;
    P.a = a;
    P.k2 = std::sqrt(std::fmax(0.0, 2.0 * n - 2.0)) * k1 / 2.0;
    return P;
}

Mat model_s0(const ModelParams& P, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("model_s0: need t > 0");
    const auto e = s0_entries(P, t);
    Mat m(3, 3);
    m(0, 0) = e[0];
    m(0, 1) = m(1, 0) = e[1];
    m(0, 2) = m(2, 0) = e[2];
    m(1, 1) = e[3];
    m(1, 2) = m(2, 1) = e[4];
    m(2, 2) = e[5];
    if (!std::isfinite(m.max_abs())) throw std::invalid_argument("model_s0: evaluated at a singularity");
    return m;
}

Mat model_s0_derivative(const ModelParams& P, double t) {
    constexpr double h = 1e-100;
    const auto e = s0_entries(P, std::complex<double>(t, h));
    auto im = [](std::complex<double> z) { return z.imag() / h; };
    Mat m(3, 3);
    m(0, 0) = im(e[0]);
    m(0, 1) = m(1, 0) = im(e[1]);
    m(0, 2) = m(2, 0) = im(e[2]);
    m(1, 1) = im(e[3]);
    m(1, 2) = m(2, 1) = im(e[4]);
    m(2, 2) = im(e[5]);
    return m;
}

double model_sbar(const ModelParams& P, double t) {
    if (P.n < 2) throw std::invalid_argument("model_sbar: needs n >= 2");
    const double r = std::sqrt(2.0 * P.n - 2.0);
    const double x = P.k2 * t / r;
    return r * P.k2 * std::cos(x) / std::sin(x);
}

Mat model_S_orbit(const ModelParams& P, double t) {
    const int d = 2 * P.n;
    Mat m(d, d);
    m(0, 1) = m(1, 0) = -0.5;
    m(1, 1) = P.k1 * std::cos(P.k1 * t) / std::sin(P.k1 * t);
    const double c = P.c();
    for (int i = 2; i < d; ++i) m(i, i) = c * std::cos(c * t) / std::sin(c * t);
    return m;
}

Mat model_A_orbit(const ModelParams& P) {
    const int d = 2 * P.n;
    Mat m(d, d);
    m(0, 1) = -0.5;
    m(1, 0) = 0.5;
    return m;
}

Mat model_B_orbit(const ModelParams& P, double t) {
    const int d = 2 * P.n;
    Mat m(d, d);
    m(0, 0) = 1.0;
    m(1, 0) = -t * versinc2(P.k1 * t);  // -(1 - cos(k1 t)) / (k1^2 t)
    m(1, 1) = sinc(P.k1 * t);
    const double c = P.c();
    for (int i = 2; i < d; ++i) m(i, i) = sinc(c * t);
    return m;
}

double model_detB(const ModelParams& P, double t) {
    return sinc(P.k1 * t) * std::pow(sinc(P.c() * t), 2.0 * P.n - 2.0);
}

Mat model_s0_flat(double t) {
    Mat m(3, 3);
    m(0, 0) = 12.0 / (t * t * t);
    m(0, 2) = m(2, 0) = 6.0 / (t * t) - 0.5;
    m(1, 1) = 1.0 / t;
    m(2, 2) = 4.0 / t;
    return m;
}

Mat model_s1_init(const ModelParams& P, double t0) {
    const int d = 2 * P.n + 1;
    Mat m(d, d);
    m.set_block(0, 0, model_s0(P, t0));
    const double c = P.c();
    for (int i = 3; i < d; ++i) m(i, i) = c * std::cos(c * t0) / std::sin(c * t0);
    return m;
}

Mat comparison_W0(double a) {
    Mat w(3, 3);
    w(0, 2) = -0.5;
    w(1, 2) = a / 2.0;
    w(2, 0) = 1.0;
    w(2, 1) = -a / 2.0;
    return w;
}

Mat comparison_L0(double k1, double a) {
    Mat l(3, 3);
    l(0, 0) = 0.25;
    l(0, 1) = l(1, 0) = -a / 4.0;
    l(1, 1) = a * a / 4.0;
    l(2, 2) = k1 * k1 - 1.0 + a * a / 4.0;
    return l;
}

Mat cmat_C1(int dim) {
    Mat c(dim, dim);
    c(2, 2) = 1.0;
    return c;
}

Mat cmat_C2(int dim) {
    Mat c(dim, dim);
    c(2, 0) = 1.0;
    return c;
}

Mat cmat_C3(int dim) {
    Mat c = Mat::identity(dim);
    c(0, 0) = 0.0;
    return c;
}

double first_blowup_time(const ModelParams& P, BlowupMode mode) {
    switch (mode) {
        case BlowupMode::s0: {
            const double c1 = P.c1();
            auto f = [&](double t) { return s_fun(c1 * t); };
            return first_root_scan(f, 1e-4, 4.0 * kPi / c1, 1024, 1e-12);
        }
        case BlowupMode::sbar: {
            if (P.n < 2) throw std::invalid_argument("first_blowup_time: sbar mode needs n >= 2");
            const double r = std::sqrt(2.0 * P.n - 2.0);
            auto f = [&](double t) { return std::sin(P.k2 * t / r); };
            return first_root_scan(f, 1e-4, 1.5 * kPi * r / P.k2, 1024, 1e-12);
        }
        case BlowupMode::jacobi: {
            auto f = [&](double t) { return model_detB(P, t); };
            const double window = 2.5 * kPi / P.k1;
            return first_root_scan(f, 1e-4, window, 2048, 1e-12);
        }
    }
    throw std::logic_error("first_blowup_time: bad mode");
}

// -- integrations --------------------------------------------------------------

namespace {

void unpack_mat(const double* y, Mat& S) {
    const int d = S.rows();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) S(i, j) = y[i * d + j];
}

// monitored scalar: size of the most negative entry. Comparison blow-up is
// one-sided (cot-type entries run to -infinity), while the t -> 0 layer is
// large and positive.
double neg_excursion(const Mat& S) { return std::fmax(0.0, -S.min_entry()); }

}  // namespace

RiccatiTrace integrate_riccati_generic(const RiccatiGenericCoeffs& coeffs, const Mat& S_init, double t0,
                                       double t1, int samples, const OdeOptions& opts) {
    const int d = S_init.rows();
    std::vector<double> y0(static_cast<size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) y0[static_cast<size_t>(i * d + j)] = S_init(i, j);

    Mat S(d, d);
    auto rhs = [&](double t, const double* y, double* dy) {
        unpack_mat(y, S);
        const Mat W = coeffs.Wp(t);
        const Mat sd = W * S + S * W.transposed() - S * coeffs.C3 * S - coeffs.L(t);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) dy[i * d + j] = sd(i, j);
    };
    auto monitor = [&](double, const double* y) {
        unpack_mat(y, S);
        return neg_excursion(S);
    };

    const auto ts = linspace(t0, t1, samples);
    const auto sol = integrate_ode(y0, rhs, t0, t1, ts, opts, monitor);

    RiccatiTrace tr;
    tr.mode = "generic";
    tr.t = sol.t;
    tr.S.resize(sol.t.size(), Mat(d, d));
    for (size_t i = 0; i < sol.t.size(); ++i) {
        unpack_mat(sol.y[i].data(), tr.S[i]);
        tr.max_symmetry_drift = std::fmax(tr.max_symmetry_drift, tr.S[i].symmetry_defect());
    }
    if (sol.blew_up) tr.blowup_time = sol.end_time;
    return tr;
}

namespace {

// Joint integration of the geodesic core, a transported frame and a matrix
// Riccati unknown. Frame coefficients are therefore exact at every
// right-hand-side evaluation (no interpolation layer).
struct JointFrameSpec {
    int frame_rows = 0;
    int analytic = 0;  // rows recomputed from (p, v)
    std::function<void(const Vec& p, const Vec& v, std::vector<Vec>&)> refresh;
    std::function<void(const Vec& p, const Vec& v, double a, std::vector<Vec>&)> rates;
};

struct JointRiccatiProblem {
    JointFrameSpec frame;
    std::function<Mat(const Vec& p, const Vec& v, double a, const std::vector<Vec>& rows, const Mat& S)> sdot;
};

Vec mult_i_local(const Vec& v) {
    Vec r(v.size());
    for (int j = 0; j + 1 < v.size(); j += 2) {
        r[j] = -v[j + 1];
        r[j + 1] = v[j];
    }
    return r;
}

RiccatiTrace run_joint(const ManifoldHandle& M, const GeodesicState& at_t0, const Mat& S_init, double t0,
                       double t1, int samples, const OdeOptions& opts, const JointRiccatiProblem& prob,
                       const std::string& mode) {
    const int amb = M.ambient_dim();
    const int fr = prob.frame.frame_rows, an = prob.frame.analytic;
    const int extra = fr - an;
    const int d = S_init.rows();
    const int off_frame = 2 * amb + 1;
    const int off_s = off_frame + extra * amb;

    std::vector<double> y0(static_cast<size_t>(off_s + d * d));
    for (int i = 0; i < amb; ++i) {
        y0[static_cast<size_t>(i)] = at_t0.position[i];
        y0[static_cast<size_t>(amb + i)] = at_t0.velocity[i];
    }
    y0[static_cast<size_t>(2 * amb)] = at_t0.a;
    for (int r = 0; r < extra; ++r)
        for (int i = 0; i < amb; ++i)
            y0[static_cast<size_t>(off_frame + r * amb + i)] = at_t0.frame[static_cast<size_t>(an + r)][i];
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) y0[static_cast<size_t>(off_s + i * d + j)] = S_init(i, j);

    std::vector<Vec> rows(static_cast<size_t>(fr), Vec(amb));
    std::vector<Vec> arates(static_cast<size_t>(an), Vec(amb));
    Mat S(d, d);

    auto rhs = [&](double, const double* y, double* dy) {
        Vec p(amb), v(amb);
        for (int i = 0; i < amb; ++i) {
            p[i] = y[i];
            v[i] = y[amb + i];
        }
        const double a = y[2 * amb];
        prob.frame.refresh(p, v, rows);
        for (int r = 0; r < extra; ++r)
            for (int i = 0; i < amb; ++i) rows[static_cast<size_t>(an + r)][i] = y[off_frame + r * amb + i];

        const Vec acc = flow::accel(M, p, v, a);
        for (int i = 0; i < amb; ++i) {
            dy[i] = v[i];
            dy[amb + i] = acc[i];
        }
        dy[2 * amb] = 0.0;
        prob.frame.rates(p, v, a, arates);
        for (int r = 0; r < extra; ++r) {
            const Vec& w = rows[static_cast<size_t>(an + r)];
            Vec rate(amb);
            if (M.kind == ManifoldKind::base) {
                // base-parallel transport of the horizontal lift
                const double alpha = 0.5 * dot(Jop(M, p, v), w);
                rate = mult_i_local(p) * (-0.5 * alpha) - p * (dot(w, v) / 4.0);
            } else {
                Vec Dw(amb);
                for (int j = 0; j < an; ++j)
                    Dw -= rows[static_cast<size_t>(j)] * metric(M, p, w, arates[static_cast<size_t>(j)]);
                rate = flow::ambient_rate(M, p, v, w, Dw);
            }
            for (int i = 0; i < amb; ++i) dy[off_frame + r * amb + i] = rate[i];
        }
        unpack_mat(y + off_s, S);
        const Mat sd = prob.sdot(p, v, a, rows, S);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) dy[off_s + i * d + j] = sd(i, j);
    };

    auto monitor = [&](double, const double* y) {
        unpack_mat(y + off_s, S);
        return neg_excursion(S);
    };

    const auto ts = linspace(t0, t1, samples);
    const auto sol = integrate_ode(y0, rhs, t0, t1, ts, opts, monitor);

    RiccatiTrace tr;
    tr.mode = mode;
    tr.t = sol.t;
    tr.S.resize(sol.t.size(), Mat(d, d));
    for (size_t i = 0; i < sol.t.size(); ++i) {
        unpack_mat(sol.y[i].data() + off_s, tr.S[i]);
        tr.max_symmetry_drift = std::fmax(tr.max_symmetry_drift, tr.S[i].symmetry_defect());
    }
    if (sol.blew_up) tr.blowup_time = sol.end_time;
    if (tr.max_symmetry_drift > 1e-6) throw std::runtime_error("riccati: symmetry drift exceeded 1e-6");
    return tr;
}

// the record's initial state advanced to t0, frame attached
GeodesicState advance_to(const ManifoldHandle& M, const GeodesicRecord& geo, double t0) {
    if (geo.states.empty()) throw std::invalid_argument("riccati: empty geodesic record");
    GeodesicState start = geo.states.front();
    if (start.frame.empty()) start = make_geodesic_state(M, start.position, start.velocity, start.a);
    if (t0 == 0.0) return start;
    GeodesicRecord seed;
    seed.manifold = M;
    seed.t = {0.0, t0};
    seed.states = {start, start};
    transport_frame(M, seed);
    return seed.states.back();
}

}  // namespace

RiccatiTrace integrate_riccati_S1(const ManifoldHandle& M, const GeodesicRecord& geo, const Mat& S1_init,
                                  double t0, double t1, int samples, const OdeOptions& opts) {
    if (!M.contact()) throw std::invalid_argument("integrate_riccati_S1: contact kinds only");
    const int dim = M.dim();
    if (S1_init.rows() != dim || S1_init.cols() != dim)
        throw std::invalid_argument("integrate_riccati_S1: initial matrix has wrong size");
    if (S1_init.symmetry_defect() > 1e-9 * (1.0 + S1_init.max_abs()))
        throw std::invalid_argument("integrate_riccati_S1: initial matrix must be symmetric");

    const GeodesicState at0 = advance_to(M, geo, t0);

    JointRiccatiProblem prob;
    prob.frame.frame_rows = dim;
    prob.frame.analytic = 3;
    prob.frame.refresh = [M](const Vec& p, const Vec& v, std::vector<Vec>& rows) {
        rows[0] = xi(M, p);
        rows[1] = v;
        rows[2] = Jop(M, p, v);
    };
    prob.frame.rates = [M](const Vec& p, const Vec& v, double a, std::vector<Vec>& rates) {
        rates[0] = flow::xi_rate(M, p, v);
        rates[1] = Jop(M, p, v) * a;
        rates[2] = flow::jvel_rate(M, p, v, a);
    };
    const Mat C1 = cmat_C1(dim), C2 = cmat_C2(dim), C3 = cmat_C3(dim);
    prob.sdot = [M, dim, C1, C2, C3](const Vec& p, const Vec& v, double a, const std::vector<Vec>& rows,
                                     const Mat& S) {
        // K-contact reduction of the point-estimate equation (H = 0 on all
        // built-in models; the identity suite checks this independently)
        Mat W(dim, dim), J(dim, dim), R(dim, dim), K1(dim, dim);
        W(0, 2) = -0.5;
        W(1, 2) = a;
        W(2, 0) = 0.5;
        W(2, 1) = -a;
        for (int i = 0; i < dim; ++i) {
            const Vec ji = Jop(M, p, rows[static_cast<size_t>(i)]);
            for (int j = 0; j < dim; ++j) J(i, j) = metric(M, p, ji, rows[static_cast<size_t>(j)]);
            const Vec ri = riemann(M, p, rows[static_cast<size_t>(i)], v, v);
            for (int j = 0; j <= i; ++j) {
                R(i, j) = metric(M, p, ri, rows[static_cast<size_t>(j)]);
                R(j, i) = R(i, j);
            }
        }
        // CR identity (checked independently): K1 couples only v0 and v1
        K1(0, 1) = K1(1, 0) = -0.5;
        const Mat Wp = W - J * (a / 2.0) + C2 * 0.5;
        const Mat L = R + K1 * (a / 2.0) - C1 * 0.25 + C3 * (a * a / 4.0);
        return Wp * S + S * Wp.transposed() - S * C3 * S - L;
    };

    return run_joint(M, at0, S1_init, t0, t1, samples, opts, prob, "S1");
}

RiccatiTrace integrate_riccati_orbit(const ManifoldHandle& M, const GeodesicRecord& geo, double t0,
                                     double t1, int samples, const OdeOptions& opts,
                                     const std::optional<Mat>& S_init) {
    if (!M.contact()) throw std::invalid_argument("integrate_riccati_orbit: contact kinds only");
    if (!geo.states.empty() && std::fabs(geo.states.front().a) > 1e-12)
        throw std::invalid_argument("integrate_riccati_orbit: orbit geodesics carry a = 0");
    const int d = 2 * M.n;

    Mat S0(d, d);
    if (S_init) {
        S0 = *S_init;
    } else {
        S0 = model_S_orbit(ModelParams::matched(M.k, M.n), t0);
    }

    const GeodesicState at0 = advance_to(M, geo, t0);
    // orbit frame spans the orthogonal complement of gammadot:
    // e1 = xi, e2 = J gammadot, then the transverse horizontal rows
    GeodesicState orb = at0;
    orb.frame.assign(static_cast<size_t>(d), Vec(M.ambient_dim()));
    orb.frame[0] = xi(M, at0.position);
    orb.frame[1] = Jop(M, at0.position, at0.velocity);
    for (int r = 2; r < d; ++r) orb.frame[static_cast<size_t>(r)] = at0.frame[static_cast<size_t>(r + 1)];

    JointRiccatiProblem prob;
    prob.frame.frame_rows = d;
    prob.frame.analytic = 2;
    prob.frame.refresh = [M](const Vec& p, const Vec& v, std::vector<Vec>& rows) {
        rows[0] = xi(M, p);
        rows[1] = Jop(M, p, v);
    };
    prob.frame.rates = [M](const Vec& p, const Vec& v, double a, std::vector<Vec>& rates) {
        rates[0] = flow::xi_rate(M, p, v);
        rates[1] = flow::jvel_rate(M, p, v, a);
    };
    prob.sdot = [M, d](const Vec& p, const Vec& v, double, const std::vector<Vec>& rows, const Mat& S) {
        Mat A(d, d), R(d, d);
        A(0, 1) = -0.5;
        A(1, 0) = 0.5;
        for (int i = 0; i < d; ++i) {
            const Vec ri = riemann(M, p, rows[static_cast<size_t>(i)], v, v);
            for (int j = 0; j <= i; ++j) {
                R(i, j) = metric(M, p, ri, rows[static_cast<size_t>(j)]);
                R(j, i) = R(i, j);
            }
        }
        return (S * S + S * A + A.transposed() * S + R) * -1.0;
    };

    return run_joint(M, orb, S0, t0, t1, samples, opts, prob, "orbit");
}

RiccatiTrace integrate_riccati_symplectic(const ManifoldHandle& M, const GeodesicRecord& geo, int block,
                                          double t0, double t1, int samples, const OdeOptions& opts,
                                          const std::optional<Mat>& S_init) {
    if (M.kind != ManifoldKind::base)
        throw std::invalid_argument("integrate_riccati_symplectic: base kind only");
    if (block != 0 && block != 1) throw std::invalid_argument("integrate_riccati_symplectic: block is 0 or 1");
    if (block == 1 && M.n < 2)
        throw std::invalid_argument("integrate_riccati_symplectic: no transverse block for n = 1");

    const GeodesicState at0 = advance_to(M, geo, t0);
    const int d = block == 0 ? 2 : 2 * M.n - 2;

    Mat S0(d, d);
    if (S_init) {
        S0 = *S_init;
    } else {
        // model start: k cot(k t) facing the holomorphic curvature k^2, and
        // (k/2) cot(k t / 2) facing the transverse curvature k^2 / 4
        if (block == 0) {
            S0(1, 1) = M.k * std::cos(M.k * t0) / std::sin(M.k * t0);
        } else {
            const double c = M.k / 2.0;
            for (int i = 0; i < d; ++i) S0(i, i) = c * std::cos(c * t0) / std::sin(c * t0);
        }
    }

    JointRiccatiProblem prob;
    if (block == 0) {
        prob.frame.frame_rows = 2;
        prob.frame.analytic = 2;
        prob.frame.refresh = [M](const Vec& p, const Vec& v, std::vector<Vec>& rows) {
            rows[0] = v;
            rows[1] = Jop(M, p, v);
        };
        prob.frame.rates = [M](const Vec&, const Vec&, double, std::vector<Vec>&) {};
    } else {
        prob.frame.frame_rows = d;
        prob.frame.analytic = 0;
        GeodesicState tr = at0;
        tr.frame.assign(static_cast<size_t>(d), Vec(M.ambient_dim()));
        for (int r = 0; r < d; ++r) tr.frame[static_cast<size_t>(r)] = at0.frame[static_cast<size_t>(r + 2)];
        prob.frame.refresh = [](const Vec&, const Vec&, std::vector<Vec>&) {};
        prob.frame.rates = [](const Vec&, const Vec&, double, std::vector<Vec>&) {};
        prob.sdot = [M, d](const Vec& p, const Vec& v, double, const std::vector<Vec>& rows, const Mat& S) {
            Mat R(d, d);
            for (int i = 0; i < d; ++i) {
                const Vec ri = riemann(M, p, rows[static_cast<size_t>(i)], v, v);
                for (int j = 0; j <= i; ++j) {
                    R(i, j) = metric(M, p, ri, rows[static_cast<size_t>(j)]);
                    R(j, i) = R(i, j);
                }
            }
            return (S * S + R) * -1.0;
        };
        return run_joint(M, tr, S0, t0, t1, samples, opts, prob, "symplectic-transverse");
    }
    prob.sdot = [M](const Vec& p, const Vec& v, double, const std::vector<Vec>& rows, const Mat& S) {
        Mat R(2, 2);
        const Vec r2 = riemann(M, p, rows[1], v, v);
        R(1, 1) = metric(M, p, r2, rows[1]);
        R(0, 1) = R(1, 0) = metric(M, p, riemann(M, p, rows[0], v, v), rows[1]);
        return (S * S + R) * -1.0;
    };
    return run_joint(M, at0, S0, t0, t1, samples, opts, prob, "symplectic-head");
}

std::optional<double> trace_blowup(const RiccatiTrace& trace) { return trace.blowup_time; }

bool loewner_leq(const Mat& A, const Mat& B, double tol) {
    Mat diff = B - A;
    diff.symmetrize();
    const double scale = 1.0 + std::fmax(A.max_abs(), B.max_abs());
    return min_symmetric_eigenvalue(diff) >= -tol * scale;
}

}  // namespace cclab
