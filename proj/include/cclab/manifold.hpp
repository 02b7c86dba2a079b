#ifndef CCLAB_MANIFOLD_HPP
#define CCLAB_MANIFOLD_HPP

#include <functional>
#include <string>
#include <vector>

#include "cclab/mat.hpp"
#include "cclab/rng.hpp"

namespace cclab {

// Built-in contact metric manifolds.
//
// hopf(k, m, n): the total space of the Hopf fibration over CP^n, realized on
//   the sphere |z|^2 = 4 in C^{n+1} = R^{2n+2}. The metric scales the
//   horizontal distribution by 1/k^2 and the Reeb direction by 1/k^4 (the
//   D-homothetic deformation of the round structure), the contact form by
//   1/k^2, and the Reeb field by k^2; for k = 1 this is the round sphere of
//   radius 2. The order-m quotient is represented on the covering space with
//   the deck action z -> e^{-2 pi i j / m} z applied wherever identification
//   matters (orbit length, tube volumes, covering counts).
//
// base(k, n): CP^n carrying 1/k^2 times the metric pushed down from the
//   sphere. Points are represented by sphere representatives and tangent
//   vectors by horizontal lifts; no chart on the quotient is built.
//
// heisenberg: R^3 with eta = dz - y dx, xi = d/dz, and the metric making
//   {d/dx + y d/dz, d/dy, d/dz} orthonormal; J sends the first frame vector
//   to minus the second. These scalings make eta(xi) = 1, |xi| = 1 and
//   d eta(X, Y) = <X, JY> hold exactly.
enum class ManifoldKind { hopf, base, heisenberg };

struct ManifoldHandle {
    ManifoldKind kind = ManifoldKind::hopf;
    double k = 1.0;
    int m = 1;
    int n = 1;

    static ManifoldHandle hopf(double k, int m, int n);
    static ManifoldHandle base(double k, int n);
    static ManifoldHandle heisenberg();

    // "hopf:k=<f>,m=<int>,n=<int>" | "base:k=<f>,n=<int>" | "heisenberg"
    static ManifoldHandle parse(const std::string& text);
    std::string describe() const;

    int dim() const;          // manifold dimension
    int ambient_dim() const;  // dimension of the representation space
    bool contact() const { return kind != ManifoldKind::base; }
    // all built-in manifolds are K-contact (in fact Sasakian)
    bool k_contact() const { return true; }
};

// Point plus tangent vectors in ambient coordinates; the universal argument
// for tensor evaluations.
struct PointTangent {
    Vec point;
    std::vector<Vec> vectors;
};

using VecField = std::function<Vec(const Vec&)>;

struct ContactData {
    Vec xi;
    std::function<double(const Vec&)> eta_of;
    std::function<Vec(const Vec&)> J_of;
    std::function<Vec(const Vec&)> h_of;
    std::function<double(const Vec&, const Vec&)> metric;
};

// -- embedding -------------------------------------------------------------

bool on_manifold(const ManifoldHandle& M, const Vec& p, double tol = 1e-9);
Vec project_point(const ManifoldHandle& M, const Vec& p);
// removes the component normal to the embedded submanifold
Vec tangent_project(const ManifoldHandle& M, const Vec& p, const Vec& u);
// additionally removes the Reeb component (orthogonal projection onto ker eta)
Vec horizontal_project(const ManifoldHandle& M, const Vec& p, const Vec& u);
void validate_point_tangent(const ManifoldHandle& M, const PointTangent& pt, double tol = 1e-9);

// -- contact metric structure ----------------------------------------------

double metric(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v);
double vnorm(const ManifoldHandle& M, const Vec& p, const Vec& u);
double eta(const ManifoldHandle& M, const Vec& p, const Vec& u);
Vec xi(const ManifoldHandle& M, const Vec& p);
Vec Jop(const ManifoldHandle& M, const Vec& p, const Vec& u);
// h = (Lie_xi J), evaluated by central differences along the Reeb flow
Vec h_op(const ManifoldHandle& M, const Vec& p, const Vec& u);
ContactData contact_data(const ManifoldHandle& M, const PointTangent& at);

// -- connection and curvature ----------------------------------------------

// Levi-Civita covariant derivative of a vector field along u at p. The field
// is sampled at projected neighbors of p by central differences (step
// configurable for stacked-derivative callers); the connection corrections
// are closed-form per manifold.
Vec cov_deriv(const ManifoldHandle& M, const Vec& p, const Vec& u, const VecField& field,
              double step = 1e-5);

// smooth extension of a tangent vector (projection of the frozen vector)
VecField extend_tangent(const ManifoldHandle& M, const Vec& v);

// (nabla_u J)(v), with v extended by projection
Vec nabla_J(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v);

// Rm(u, v) w as a (1,3)-tensor in ambient representation (closed form)
Vec riemann(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v, const Vec& w);
double sectional(const ManifoldHandle& M, const Vec& p, const Vec& u, const Vec& v);

// Tanaka-Webster curvature of the generalized Tanaka connection, horizontal
// arguments; the mixed variant takes the Reeb field as the second slot.
Vec tanaka_curvature(const ManifoldHandle& M, const Vec& p, const Vec& X, const Vec& Y, const Vec& Z);
Vec tanaka_curvature_mixed(const ManifoldHandle& M, const Vec& p, const Vec& X, const Vec& Z);

// N(X) = P((nabla_X J) X)
Vec n_tensor(const ManifoldHandle& M, const Vec& p, const Vec& X);

// generalized Tanaka connection applied to a field
Vec tanaka_deriv(const ManifoldHandle& M, const Vec& p, const Vec& u, const VecField& field,
                 double step = 1e-5);

// -- Reeb dynamics and quotient --------------------------------------------

double reeb_orbit_length(const ManifoldHandle& M);  // 4 pi / (m k^2); +inf for heisenberg
Vec reeb_flow(const ManifoldHandle& M, const Vec& p, double s);
Vec deck_transform(const ManifoldHandle& M, const Vec& p, int j);
// ambient chordal distance to the nearest deck image of q
double quotient_chord(const ManifoldHandle& M, const Vec& p, const Vec& q);
// ambient chordal distance from p to the full Reeb orbit through q
double orbit_chord(const ManifoldHandle& M, const Vec& p, const Vec& q);

// total Riemannian volume (closed form; quotient included)
double total_volume(const ManifoldHandle& M);

// -- sampling ----------------------------------------------------------------

Vec random_point(const ManifoldHandle& M, SplitMix64& rng);
Vec random_tangent(const ManifoldHandle& M, const Vec& p, SplitMix64& rng);     // g-unit
Vec random_horizontal(const ManifoldHandle& M, const Vec& p, SplitMix64& rng);  // g-unit, in ker eta
// deterministic g-orthonormal basis of ker eta at p
std::vector<Vec> horizontal_basis(const ManifoldHandle& M, const Vec& p);

}  // namespace cclab

#endif
