#include "cclab/manifold.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cclab/fd.hpp"

namespace cclab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// complex pairing convention: z_j = (x_{2j}, x_{2j+1})
Vec mult_i(const Vec& v) {
    Vec r(v.size());
    for (int j = 0; j + 1 < v.size(); j += 2) {
        r[j] = -v[j + 1];
        r[j + 1] = v[j];
    }
    return r;
}

// rotation z -> e^{i theta} z on every complex pair
Vec rot(const Vec& v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Vec r(v.size());
    for (int j = 0; j + 1 < v.size(); j += 2) {
        r[j] = c * v[j] - s * v[j + 1];
        r[j + 1] = s * v[j] + c * v[j + 1];
    }
    return r;
}

// ambient-unit Reeb field of the round structure, -i z / 2
Vec xi_std(const Vec& z) { return mult_i(z) * -0.5; }

double eta_std(const Vec& z, const Vec& u) { return dot(xi_std(z), u); }

// canonical-variation parameter; vanishes at k = 1
double beta_of(const ManifoldHandle& M) { return (1.0 / (M.k * M.k) - 1.0) / 2.0; }

// Heisenberg frame components of an ambient vector at p
Vec heis_comps(const Vec& p, const Vec& u) {
    Vec c(3);
    c[0] = u[0];
    c[1] = u[1];
    c[2] = u[2] - p[1] * u[0];
    return c;
}

Vec heis_ambient(const Vec& p, const Vec& c) {
    Vec u(3);
    u[0] = c[0];
    u[1] = c[1];
    u[2] = c[0] * p[1] + c[2];
    return u;
}

// nonzero Christoffel symbols in the orthonormal left-invariant frame
// (0-based): G[k][i][j] = <nabla_{e_i} e_j, e_k>
double heis_gamma(int k, int i, int j) {
    if (k == 2 && i == 0 && j == 1) return -0.5;
    if (k == 2 && i == 1 && j == 0) return 0.5;
    if (k == 1 && ((i == 0 && j == 2) || (i == 2 && j == 0))) return 0.5;
    if (k == 0 && ((i == 1 && j == 2) || (i == 2 && j == 1))) return -0.5;
    return 0.0;
}

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

ManifoldHandle ManifoldHandle::hopf(double k, int m, int n) {
    if (!(k > 0) || m < 1 || n < 1) fail("hopf: need k > 0, m >= 1, n >= 1");
    return {ManifoldKind::hopf, k, m, n};
}

ManifoldHandle ManifoldHandle::base(double k, int n) {
    if (!(k > 0) || n < 1) fail("base: need k > 0, n >= 1");
    return {ManifoldKind::base, k, 1, n};
}

ManifoldHandle ManifoldHandle::heisenberg() { return {ManifoldKind::heisenberg, 1.0, 1, 1}; }

ManifoldHandle ManifoldHandle::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    double k = 1.0;
    int m = 1, n = 1;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) fail("manifold: expected key=value in '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            try {
                if (key == "k")
                    k = std::stod(val);
                else if (key == "m")
                    m = std::stoi(val);
                else if (key == "n")
                    n = std::stoi(val);
                else
                    fail("manifold: unknown key '" + key + "'");
            } catch (const std::invalid_argument&) {
                throw;
            } catch (const std::exception&) {
                fail("manifold: bad value '" + val + "' for key '" + key + "'");
            }
        }
    }
    if (head == "hopf") return hopf(k, m, n);
    if (head == "base") return base(k, n);
    if (head == "heisenberg") return heisenberg();
    fail("manifold: unknown kind '" + head + "'");
}

std::string ManifoldHandle::describe() const {
    std::ostringstream os;
    switch (kind) {
        case ManifoldKind::hopf:
            os << "hopf:k=" << k << ",m=" << m << ",n=" << n;
            break;
        case ManifoldKind::base:
            os << "base:k=" << k << ",n=" << n;
            break;
        case ManifoldKind::heisenberg:
            os << "heisenberg";
            break;
    }
    return os.str();
}

int ManifoldHandle::dim() const {
    switch (kind) {
        case ManifoldKind::hopf:
            return 2 * n + 1;
        case ManifoldKind::base:
            return 2 * n;
        case ManifoldKind::heisenberg:
            return 3;
    }
    return 0;
}

int ManifoldHandle::ambient_dim() const {
    switch (kind) {
        case ManifoldKind::hopf:
        case ManifoldKind::base:
            return 2 * n + 2;
        case ManifoldKind::heisenberg:
            return 3;
    }
    return 0;
}

// -- embedding ---------------------------------------------------------------

bool on_manifold(const ManifoldHandle& M, const Vec& p, double tol) {
    if (p.size() != M.ambient_dim() || !all_finite(p)) return false;
    if (M.kind == ManifoldKind::heisenberg) return true;
    return std::fabs(dot(p, p) - 4.0) <= tol * 4.0;
}

Vec project_point(const ManifoldHandle& M, const Vec& p) {
    if (M.kind == ManifoldKind::heisenberg) return p;
    const double r = norm(p);
    if (r < 1e-12) throw std::runtime_error("project_point: cannot project the origin");
    return p * (2.0 / r);
}

Vec tangent_project(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    if (M.kind == ManifoldKind::heisenberg) return u;
    Vec r = u - p * (dot(u, p) / 4.0);
    if (M.kind == ManifoldKind::base) r -= xi_std(p) * eta_std(p, r);
    return r;
}

Vec horizontal_project(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    Vec r = tangent_project(M, p, u);
    if (M.kind == ManifoldKind::hopf) r -= xi_std(p) * eta_std(p, r);
    if (M.kind == ManifoldKind::heisenberg) {
        Vec c = heis_comps(p, r);
        c[2] = 0.0;
        r = heis_ambient(p, c);
    }
    return r;
}

void validate_point_tangent(const ManifoldHandle& M, const PointTangent& pt, double tol) {
    if (pt.point.size() != M.ambient_dim()) fail("point has wrong ambient dimension");
    if (!on_manifold(M, pt.point, tol)) fail("point violates the embedding constraint");
    for (const auto& v : pt.vectors) {
        if (v.size() != M.ambient_dim()) fail("tangent vector has wrong ambient dimension");
        const Vec d = v - tangent_project(M, pt.point, v);
        if (norm(d) > tol * (1.0 + norm(v))) fail("vector is not tangent to the manifold");
    }
}

// -- contact metric structure ------------------------------------------------

double metric(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v) {
    switch (M.kind) {
        case ManifoldKind::hopf: {
            const double cu = eta_std(p, u), cv = eta_std(p, v);
            const double k2 = M.k * M.k;
            return (dot(u, v) - cu * cv) / k2 + cu * cv / (k2 * k2);
        }
        case ManifoldKind::base:
            return dot(u, v) / (M.k * M.k);
        case ManifoldKind::heisenberg:
            return dot(heis_comps(p, u), heis_comps(p, v));
    }
    return 0.0;
}

double vnorm(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    return std::sqrt(std::fmax(0.0, metric(M, p, u, u)));
}

double eta(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    switch (M.kind) {
        case ManifoldKind::hopf:
            return eta_std(p, u) / (M.k * M.k);
        case ManifoldKind::heisenberg:
            return u[2] - p[1] * u[0];
        case ManifoldKind::base:
            fail("eta: base kind carries no contact form");
    }
    return 0.0;
}

Vec xi(const ManifoldHandle& M, const Vec& p) {
    switch (M.kind) {
        case ManifoldKind::hopf:
            return xi_std(p) * (M.k * M.k);
        case ManifoldKind::heisenberg:
            return Vec{0.0, 0.0, 1.0};
        case ManifoldKind::base:
            fail("xi: base kind carries no Reeb field");
    }
    return Vec{};
}

Vec Jop(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    switch (M.kind) {
        case ManifoldKind::hopf:
        case ManifoldKind::base: {
            const Vec iu = mult_i(u);
            return iu - p * (dot(iu, p) / 4.0);
        }
        case ManifoldKind::heisenberg: {
            const Vec c = heis_comps(p, u);
            Vec r(3);
            r[0] = c[1];
            r[1] = -c[0];
            r[2] = 0.0;
            return heis_ambient(p, r);
        }
    }
    return Vec{};
}

Vec h_op(const ManifoldHandle& M, const Vec& p, const Vec& u) {
    if (!M.contact()) fail("h_op: base kind carries no contact structure");
    // (L_xi J)(u) = d/ds [ dPhi_{-s} J_{Phi_s p} dPhi_s u ] at s = 0
    auto pullback = [&](double s) -> Vec {
        if (M.kind == ManifoldKind::hopf) {
            const double theta = -0.5 * M.k * M.k * s;
            return rot(Jop(M, rot(p, theta), rot(u, theta)), -theta);
        }
        Vec q = p;
        q[2] += s;
        return Jop(M, q, u);
    };
    return fd_central(pullback, kFdStepFirst);
}

ContactData contact_data(const ManifoldHandle& M, const PointTangent& at) {
    if (!M.contact()) fail("contact_data: base kind carries no contact structure");
    validate_point_tangent(M, at, 1e-9);
    const Vec p = at.point;
    ContactData cd;
    cd.xi = xi(M, p);
    cd.eta_of = [M, p](const Vec& u) { return eta(M, p, u); };
    cd.J_of = [M, p](const Vec& u) { return Jop(M, p, u); };
    cd.h_of = [M, p](const Vec& u) { return h_op(M, p, u); };
    cd.metric = [M, p](const Vec& u, const Vec& v) { return metric(M, p, u, v); };
    return cd;
}

// -- connection ----------------------------------------------------------------

VecField extend_tangent(const ManifoldHandle& M, const Vec& v) {
    if (M.kind == ManifoldKind::heisenberg) return [v](const Vec&) { return v; };
    if (M.kind == ManifoldKind::base)
        return [M, v](const Vec& q) { return tangent_project(M, q, v); };
    return [M, v](const Vec& q) { return tangent_project(M, q, v); };
}

Vec cov_deriv(const ManifoldHandle& M, const Vec& p, const Vec& u, const VecField& field, double step) {
    const double nu = norm(u);
    const Vec w = field(p);
    if (M.kind == ManifoldKind::heisenberg) {
        Vec dcomp(3);
        if (nu > 0) {
            const Vec uh = u * (1.0 / nu);
            auto comps_at = [&](double s) {
                const Vec q = axpy(s, uh, p);
                return heis_comps(q, field(q));
            };
            dcomp = fd_central(comps_at, step) * nu;
        }
        const Vec uc = heis_comps(p, u), wc = heis_comps(p, w);
        Vec out(3);
        for (int kk = 0; kk < 3; ++kk) {
            double s = dcomp[kk];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) s += uc[i] * wc[j] * heis_gamma(kk, i, j);
            out[kk] = s;
        }
        return heis_ambient(p, out);
    }

    Vec flat(p.size());
    if (nu > 0) {
        const Vec uh = u * (1.0 / nu);
        auto field_at = [&](double s) { return field(project_point(M, axpy(s, uh, p))); };
        flat = fd_central(field_at, step) * nu;
    }
    Vec out = tangent_project(M, p, flat);
    if (M.kind == ManifoldKind::base) return out;  // O'Neill: horizontal part of the sphere connection

    // D-homothetic correction tensor; identically zero at k = 1
    const double beta = beta_of(M);
    if (beta != 0.0)
        out -= (Jop(M, p, u) * eta_std(p, w) + Jop(M, p, w) * eta_std(p, u)) * beta;
    return out;
}

Vec nabla_J(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v) {
    const VecField ext = extend_tangent(M, v);
    const VecField jv = [M, ext](const Vec& q) { return Jop(M, q, ext(q)); };
    return cov_deriv(M, p, u, jv) - Jop(M, p, cov_deriv(M, p, u, ext));
}

// -- curvature -----------------------------------------------------------------

Vec riemann(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v, const Vec& w) {
    switch (M.kind) {
        case ManifoldKind::hopf: {
            // round part plus the canonical-variation corrections
            Vec r = (u * dot(v, w) - v * dot(u, w)) * 0.25;
            const double beta = beta_of(M);
            if (beta != 0.0) {
                const Vec ju = Jop(M, p, u), jv = Jop(M, p, v), jw = Jop(M, p, w);
                const double eu = eta_std(p, u), ev = eta_std(p, v), ew = eta_std(p, w);
                const Vec xs = xi_std(p);
                Vec corr = jw * dot(ju, v) + jv * (0.5 * dot(ju, w)) - ju * (0.5 * dot(jv, w));
                corr += xs * (0.5 * (eu * dot(v, w) - ev * dot(u, w)));
                corr += u * (ev * ew) - v * (eu * ew);
                r += corr * beta;
                r += (u * (ev * ew) - v * (eu * ew)) * (beta * beta);
            }
            return r;
        }
        case ManifoldKind::base: {
            // complex space form of holomorphic sectional curvature k^2
            const Vec ju = Jop(M, p, u), jv = Jop(M, p, v), jw = Jop(M, p, w);
            Vec r = u * dot(v, w) - v * dot(u, w);
            r += ju * dot(jv, w) - jv * dot(ju, w) - jw * (2.0 * dot(ju, v));
            return r * 0.25;
        }
        case ManifoldKind::heisenberg: {
            const Vec uc = heis_comps(p, u), vc = heis_comps(p, v), wc = heis_comps(p, w);
            const double K[3][3] = {{0, -0.75, 0.25}, {-0.75, 0, 0.25}, {0.25, 0.25, 0}};
            Vec out(3);
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    const double pl = K[a][b] * (uc[a] * vc[b] - uc[b] * vc[a]);
                    if (pl == 0.0) continue;
                    out[a] += pl * wc[b];
                    out[b] -= pl * wc[a];
                }
            return heis_ambient(p, out);
        }
    }
    return Vec{};
}

double sectional(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v) {
    const double guu = metric(M, p, u, u), gvv = metric(M, p, v, v), guv = metric(M, p, u, v);
    const double area = guu * gvv - guv * guv;
    if (area < 1e-14) fail("sectional: degenerate plane");
    return metric(M, p, riemann(M, p, u, v, v), u) / area;
}

namespace {

void require_horizontal(const ManifoldHandle& M, const Vec& p, const Vec& X, const char* who) {
    if (std::fabs(eta(M, p, X)) > 1e-9 * (1.0 + vnorm(M, p, X)))
        fail(std::string(who) + ": input has a Reeb component");
}

}  // namespace

Vec tanaka_curvature(const ManifoldHandle& M, const Vec& p, const Vec& X, const Vec& Y, const Vec& Z) {
    if (!M.contact()) fail("tanaka_curvature: contact kinds only");
    require_horizontal(M, p, X, "tanaka_curvature");
    require_horizontal(M, p, Y, "tanaka_curvature");
    require_horizontal(M, p, Z, "tanaka_curvature");
    const Vec jx = Jop(M, p, X) + Jop(M, p, h_op(M, p, X));
    const Vec jy = Jop(M, p, Y) + Jop(M, p, h_op(M, p, Y));
    Vec r = horizontal_project(M, p, riemann(M, p, X, Y, Z));
    r += jx * (0.25 * metric(M, p, jy, Z));
    r -= jy * (0.25 * metric(M, p, jx, Z));
    r += Jop(M, p, Z) * (0.5 * metric(M, p, X, Jop(M, p, Y)));
    return r;
}

Vec tanaka_curvature_mixed(const ManifoldHandle& M, const Vec& p, const Vec& X, const Vec& Z) {
    if (!M.contact()) fail("tanaka_curvature_mixed: contact kinds only");
    require_horizontal(M, p, X, "tanaka_curvature_mixed");
    const Vec rm = riemann(M, p, X, xi(M, p), Z);
    return horizontal_project(M, p, rm) + horizontal_project(M, p, nabla_J(M, p, X, Z)) * 0.5;
}

Vec n_tensor(const ManifoldHandle& M, const Vec& p, const Vec& X) {
    const Vec nj = nabla_J(M, p, X, X);
    return M.contact() ? horizontal_project(M, p, nj) : nj;
}

Vec tanaka_deriv(const ManifoldHandle& M, const Vec& p, const Vec& u, const VecField& field, double step) {
    if (!M.contact()) fail("tanaka_deriv: contact kinds only");
    const Vec v = field(p);
    const Vec nabla_uv = cov_deriv(M, p, u, field, step);
    const VecField xif = [M](const Vec& q) { return xi(M, q); };
    const Vec nabla_uxi = cov_deriv(M, p, u, xif);
    Vec r = nabla_uv;
    r += Jop(M, p, v) * (0.5 * eta(M, p, u));
    r -= nabla_uxi * eta(M, p, v);
    r += xi(M, p) * metric(M, p, nabla_uxi, v);
    return r;
}

// -- Reeb dynamics and quotient --------------------------------------------

double reeb_orbit_length(const ManifoldHandle& M) {
    switch (M.kind) {
        case ManifoldKind::hopf:
            return 4.0 * kPi / (M.m * M.k * M.k);
        case ManifoldKind::heisenberg:
            return std::numeric_limits<double>::infinity();  // orbits are lines
        case ManifoldKind::base:
            fail("reeb_orbit_length: base kind has no Reeb orbit");
    }
    return 0.0;
}

Vec reeb_flow(const ManifoldHandle& M, const Vec& p, double s) {
    switch (M.kind) {
        case ManifoldKind::hopf:
            return rot(p, -0.5 * M.k * M.k * s);
        case ManifoldKind::heisenberg: {
            Vec q = p;
            q[2] += s;
            return q;
        }
        case ManifoldKind::base:
            fail("reeb_flow: base kind has no Reeb field");
    }
    return Vec{};
}

Vec deck_transform(const ManifoldHandle& M, const Vec& p, int j) {
    if (M.kind != ManifoldKind::hopf || M.m == 1) return p;
    return rot(p, -2.0 * kPi * j / M.m);
}

double quotient_chord(const ManifoldHandle& M, const Vec& p, const Vec& q) {
    if (M.kind != ManifoldKind::hopf || M.m == 1) return norm(p - q);
    double best = norm(p - q);
    for (int j = 1; j < M.m; ++j) best = std::fmin(best, norm(p - deck_transform(M, q, j)));
    return best;
}

double orbit_chord(const ManifoldHandle& M, const Vec& p, const Vec& q) {
    switch (M.kind) {
        case ManifoldKind::hopf: {
            // min over the circle: |p - e^{i phi} q|^2 = 8 - 2 |<p, q>_C|
            const double re = dot(p, q);
            const double im = dot(p, mult_i(q));
            return std::sqrt(std::fmax(0.0, 8.0 - 2.0 * std::hypot(re, im)));
        }
        case ManifoldKind::heisenberg:
            return std::hypot(p[0] - q[0], p[1] - q[1]);
        case ManifoldKind::base:
            fail("orbit_chord: base kind has no Reeb orbit");
    }
    return 0.0;
}

double total_volume(const ManifoldHandle& M) {
    // vol(S^{2n+1}(r)) = 2 pi^{n+1} r^{2n+1} / n!
    double fact = 1.0;
    for (int i = 2; i <= M.n; ++i) fact *= i;
    const double vol_sphere = 2.0 * std::pow(kPi, M.n + 1) * std::pow(2.0, 2 * M.n + 1) / fact;
    switch (M.kind) {
        case ManifoldKind::hopf:
            return vol_sphere * std::pow(M.k, -(2.0 * M.n + 2.0)) / M.m;
        case ManifoldKind::base:
            return vol_sphere / (4.0 * kPi) * std::pow(M.k, -2.0 * M.n);
        case ManifoldKind::heisenberg:
            fail("total_volume: heisenberg has infinite volume");
    }
    return 0.0;
}

// -- sampling -----------------------------------------------------------------

Vec random_point(const ManifoldHandle& M, SplitMix64& rng) {
    Vec p(M.ambient_dim());
    if (M.kind == ManifoldKind::heisenberg) {
        for (int i = 0; i < 3; ++i) p[i] = rng.normal();
        return p;
    }
    double nn = 0.0;
    do {
        for (int i = 0; i < p.size(); ++i) p[i] = rng.normal();
        nn = norm(p);
    } while (nn < 1e-8);
    return p * (2.0 / nn);
}

namespace {

Vec random_in_subspace(const ManifoldHandle& M, const Vec& p, SplitMix64& rng, bool horizontal) {
    while (true) {
        Vec v(M.ambient_dim());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.normal();
        v = horizontal ? horizontal_project(M, p, v) : tangent_project(M, p, v);
        const double nn = vnorm(M, p, v);
        if (nn > 1e-6) return v * (1.0 / nn);
    }
}

}  // namespace

Vec random_tangent(const ManifoldHandle& M, const Vec& p, SplitMix64& rng) {
    return random_in_subspace(M, p, rng, M.kind == ManifoldKind::base);
}

Vec random_horizontal(const ManifoldHandle& M, const Vec& p, SplitMix64& rng) {
    return random_in_subspace(M, p, rng, true);
}

std::vector<Vec> horizontal_basis(const ManifoldHandle& M, const Vec& p) {
    const int want = M.kind == ManifoldKind::heisenberg ? 2 : 2 * M.n;
    std::vector<Vec> basis;
    for (int axis = 0; axis < M.ambient_dim() && static_cast<int>(basis.size()) < want; ++axis) {
        Vec v(M.ambient_dim());
        v[axis] = 1.0;
        v = horizontal_project(M, p, v);
        for (const auto& b : basis) v -= b * metric(M, p, b, v);
        const double nn = vnorm(M, p, v);
        if (nn > 1e-6) basis.push_back(v * (1.0 / nn));
    }
    if (static_cast<int>(basis.size()) != want) throw std::runtime_error("horizontal_basis: span defect");
    return basis;
}

}  // namespace cclab
