#ifndef CCLAB_RICCATI_HPP
#define CCLAB_RICCATI_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cclab/geodesic.hpp"
#include "cclab/manifold.hpp"
#include "cclab/mat.hpp"
#include "cclab/ode.hpp"

namespace cclab {

// Curvature bounds and vertical momentum entering the comparison solutions.
// c1 drives the 3x3 block, c the transverse one; in matched mode
// k2 = sqrt(2n-2) k1 / 2, so c = k1 / 2.
struct ModelParams {
    double k1 = 1.0;
    double k2 = 0.0;
    double a = 0.0;
    int n = 1;

    double c1() const;  // sqrt(k1^2 + a^2)
    double c() const;   // k2 / sqrt(2n-2)
    static ModelParams matched(double k1, int n, double a = 0.0);
};

struct RiccatiTrace {
    std::vector<double> t;
    std::vector<Mat> S;
    std::optional<double> blowup_time;  // last accepted time before blow-up
    std::string mode;
    double max_symmetry_drift = 0.0;
};

// -- closed-form model solutions ---------------------------------------------

// the 3x3 comparison solution of the point estimate; entries are evaluated
// with series branches near t = 0, so they stay accurate through the
// 12/t^3 regime
Mat model_s0(const ModelParams& P, double t);
Mat model_s0_derivative(const ModelParams& P, double t);  // complex-step d/dt

// scalar comparison solution sqrt(2n-2) k2 cot(k2 t / sqrt(2n-2)); n >= 2
double model_sbar(const ModelParams& P, double t);

// closed-orbit quantities: S, A and the Jacobi matrix B, all 2n x 2n over
// the frame (xi, J gammadot, transverse...)
Mat model_S_orbit(const ModelParams& P, double t);
Mat model_A_orbit(const ModelParams& P);
Mat model_B_orbit(const ModelParams& P, double t);
double model_detB(const ModelParams& P, double t);

// flat comparison solution (vanishing Tanaka-Webster curvature); solves the
// point-estimate equation on the heisenberg model
Mat model_s0_flat(double t);

// full initial value for the (2n+1)-dimensional point Riccati at small t0:
// diag(model_s0, c cot(c t0) I)
Mat model_s1_init(const ModelParams& P, double t0);

// block coefficients of the point comparison equation
Mat comparison_W0(double a);
Mat comparison_L0(double k1, double a);
Mat cmat_C1(int dim);
Mat cmat_C2(int dim);
Mat cmat_C3(int dim);

enum class BlowupMode { s0, sbar, jacobi };

// first positive singularity of the requested closed form
double first_blowup_time(const ModelParams& P, BlowupMode mode);

// -- integrations --------------------------------------------------------------

// dS/dt = Wp S + S Wp^T - S C3 S - L
struct RiccatiGenericCoeffs {
    std::function<Mat(double)> Wp;
    std::function<Mat(double)> L;
    Mat C3;
};
RiccatiTrace integrate_riccati_generic(const RiccatiGenericCoeffs& coeffs, const Mat& S_init, double t0,
                                       double t1, int samples, const OdeOptions& opts = {});

// Point-estimate Riccati along the geodesic of `geo`, coefficients evaluated
// from the frame carried along the flow. The unknown is the full
// (2n+1) x (2n+1) symmetric matrix over the frame (xi, gammadot, J gammadot,
// transverse...).
RiccatiTrace integrate_riccati_S1(const ManifoldHandle& M, const GeodesicRecord& geo, const Mat& S1_init,
                                  double t0, double t1, int samples = 257, const OdeOptions& opts = {});

// Closed-orbit Riccati (frame xi, J gammadot, transverse...; the geodesic
// leaves the orbit with a = 0). S_init defaults to the model closed form at
// t0 when omitted.
RiccatiTrace integrate_riccati_orbit(const ManifoldHandle& M, const GeodesicRecord& geo, double t0,
                                     double t1, int samples = 257, const OdeOptions& opts = {},
                                     const std::optional<Mat>& S_init = {});

// Symplectic-frame Riccati on the base kind along a Riemannian geodesic,
// dS/dt = -S^2 - R in a parallel frame (the A-rotation vanishes on the
// Kaehler models). block 0 covers (gammadot, J gammadot); block 1 the
// transverse directions. The blocks decouple on the models, so each runs to
// its own blow-up.
RiccatiTrace integrate_riccati_symplectic(const ManifoldHandle& M, const GeodesicRecord& geo, int block,
                                          double t0, double t1, int samples = 257,
                                          const OdeOptions& opts = {},
                                          const std::optional<Mat>& S_init = {});

// numerical blow-up time of a trace, if any
std::optional<double> trace_blowup(const RiccatiTrace& trace);

// Loewner order A <= B up to tol (eigenvalues of the symmetrized difference)
bool loewner_leq(const Mat& A, const Mat& B, double tol = 1e-9);

}  // namespace cclab

#endif
