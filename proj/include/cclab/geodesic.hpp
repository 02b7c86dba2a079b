#ifndef CCLAB_GEODESIC_HPP
#define CCLAB_GEODESIC_HPP

#include <optional>
#include <vector>

#include "cclab/manifold.hpp"
#include "cclab/ode.hpp"

namespace cclab {

// State along a sub-Riemannian geodesic. The frame rows are indexed 0..2n
// with v0 = xi, v1 = gammadot, v2 = J gammadot; rows 3.. span the transverse
// horizontal directions and are transported so their derivatives stay inside
// span{v0, v1, v2} (which makes the auxiliary rotation U trivially the
// identity).
struct GeodesicState {
    Vec position;
    Vec velocity;  // g-unit, horizontal
    double a = 0.0;
    std::vector<Vec> frame;  // empty until transport_frame
    Mat u_rot;               // (2n-2)x(2n-2) orthogonal
};

struct GeodesicRecord {
    ManifoldHandle manifold;
    std::vector<double> t;
    std::vector<GeodesicState> states;
    // derived traces, filled by transport_frame
    std::vector<Mat> H;       // <h v_i, v_j>
    std::vector<Vec> Ncomp;   // <(nabla_{v1} J) v1, v_i>
    double speed_drift = 0.0; // max | |v|_g - 1 |
    double a_drift = 0.0;
    double reortho_drift = 0.0;  // worst Gram defect seen before re-orthonormalization
    bool blew_up = false;
    double end_time = 0.0;
};

// Initial state with velocity v (g-unit horizontal) and vertical momentum a;
// builds the canonical frame at the start point.
GeodesicState make_geodesic_state(const ManifoldHandle& M, const Vec& p, const Vec& v, double a);

GeodesicRecord integrate_geodesic(const ManifoldHandle& M, const GeodesicState& start, double t_max,
                                  int samples = 129, const OdeOptions& opts = {});

// Fills frames (and the H/N traces) on the record's grid by re-integrating
// the joint geodesic + frame system from the record's initial state.
void transport_frame(const ManifoldHandle& M, GeodesicRecord& record);

struct ShootConfig {
    int direction_samples = 12;
    int a_samples = 13;
    double a_max = 0.0;  // 0 = 4k
    double t_max = 0.0;  // 0 = 2 pi / k + slack
    int coarse_samples = 256;
    int refine_iterations = 160;
    double gap_tol = 1e-6;
    uint64_t seed = 1;
    int threads = 1;
};

struct DistanceResult {
    double distance = 0.0;
    double gap = 0.0;  // ambient end-point residual of the witness
    bool converged = false;
    int shots_converged = 0;
    GeodesicRecord witness;
};

// Upper bound on d_CC by multi-start shooting over (initial horizontal
// direction, a), refined by derivative-free descent on the end-point gap.
DistanceResult cc_distance(const ManifoldHandle& M, const Vec& p, const Vec& q, const ShootConfig& cfg = {});

// Low-level pieces of the geodesic flow, shared with the Riccati and Jacobi
// integrations that ride along it.
namespace flow {

// ambient acceleration of the geodesic system at (p, v) with vertical
// momentum a
Vec accel(const ManifoldHandle& M, const Vec& p, const Vec& v, double a);

// ambient rate of a vector transported along the curve with prescribed
// covariant rate Dv
Vec ambient_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel, const Vec& v, const Vec& Dv);

// covariant rate of xi along a unit-speed geodesic: -J(vel)/2
Vec xi_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel);
// covariant rate of J(vel) along the geodesic: xi/2 - a vel on contact kinds
Vec jvel_rate(const ManifoldHandle& M, const Vec& p, const Vec& vel, double a);

}  // namespace flow

}  // namespace cclab

#endif
