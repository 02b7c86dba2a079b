#ifndef CCLAB_COMPARISON_HPP
#define CCLAB_COMPARISON_HPP

#include <optional>
#include <vector>

#include "cclab/geodesic.hpp"
#include "cclab/manifold.hpp"
#include "cclab/riccati.hpp"

namespace cclab {

enum class DiameterMode { holomorphic, trace };

struct DiameterOptions {
    int margin_samples = 120;
    double t0 = 1e-3;
    int distance_pairs = 2;  // empirical cc-distance probes (0 disables)
    int threads = 1;
};

struct DiameterEstimate {
    bool applicable = false;
    double k_used = 0.0;   // measured curvature constant (k1 or k2)
    double margin = 0.0;   // measured infimum of the hypothesis quantity
    double bound = 0.0;    // diameter / conjugate bound implied by the curvature constant
    std::vector<double> blowup_times;
    double max_blowup = 0.0;
    std::vector<double> trace_blowups;  // symplectic check: transverse events
    double empirical_max_distance = 0.0;
    bool pass = false;  // every blow-up within bound + 1e-6
};

// Integrates the point-estimate Riccati along seeded geodesics and compares
// the blow-up times against the diameter bound computed from the measured
// curvature infimum.
DiameterEstimate diameter_check(const ManifoldHandle& M, DiameterMode mode, int samples, uint64_t seed,
                                const DiameterOptions& opts = {});

// Symplectic analogue on the base kind: first conjugate times along
// Riemannian geodesics against pi / k1 (head block) and the transverse trace
// bound (n >= 2).
DiameterEstimate symplectic_conjugate_check(const ManifoldHandle& M, int samples, uint64_t seed,
                                            const DiameterOptions& opts = {});

// Distance from x to the reference closed Reeb orbit (the fiber through
// (2, 0, ..., 0)) by shooting over (direction angle, time). A coarse table
// of geodesics from the orbit is built once and shared.
class OrbitDistanceSolver {
public:
    OrbitDistanceSolver(const ManifoldHandle& M, int theta_grid = 48, int t_grid = 96);
    // returns the realized time (= distance) and the end-point residual
    struct Result {
        double distance = 0.0;
        double gap = 0.0;
    };
    Result distance(const Vec& x) const;
    const Vec& orbit_point() const { return c0_; }

private:
    ManifoldHandle M_;
    Vec c0_;
    std::vector<Vec> basis_;
    int theta_grid_, t_grid_;
    double t_max_;
    std::vector<Vec> table_;  // endpoints, theta-major
};

struct TubeOptions {
    int mc_samples = 2000;    // 0 skips the Monte-Carlo oracle
    int fine_samples = 1025;  // radial quadrature resolution
    int threads = 1;
    double hit_radius = 1e-5;  // clustering radius for covering counts
};

struct TubeVolumeReport {
    std::vector<double> T;
    std::vector<double> V, V_err;   // Jacobian route
    std::vector<double> Vbar;       // model volume
    std::vector<double> ratio, ratio_err;
    std::vector<double> V_mc, V_mc_err;  // Monte-Carlo oracle (empty if skipped)
    std::optional<int> detected_m;
    double orbit_length = 0.0;
    double model_orbit_length = 0.0;
    double min_truncation = 0.0;  // smallest r(x, v) encountered
    bool ratio_monotone = true;   // within twice the error estimate
    bool routes_agree = true;     // Jacobian vs Monte-Carlo within 3 sigma
};

// Tube volume V(C, T) around the reference closed orbit, computed from the
// Jacobian of the normal exponential map (variational equations) and checked
// in dimension 3 against direct Monte-Carlo sampling of the tube indicator.
TubeVolumeReport tube_volume(const ManifoldHandle& M, const std::vector<double>& T_grid, int angular,
                             uint64_t seed, const TubeOptions& opts = {});

// Jacobi matrix of the normal exponential map of the reference orbit along
// the ray with initial direction v, from the variational equations. Row 0 is
// the Reeb variation, the remaining rows are direction variations divided by
// t; columns are the transported frame (xi, J gammadot, transverse...).
std::vector<Mat> normal_jacobi_B(const ManifoldHandle& M, const Vec& v, const std::vector<double>& ts);

struct EqualityDiagnostics {
    double T = 0.0;  // focal radius pi / k1
    int focal_samples = 0;
    double shape_operator_norm = 0.0;
    double xi_tangency = 0.0;
    double j_invariance = 0.0;
    std::optional<int> multiplicity;
    int exp_circle_count = 0;      // covering count of the direction circle (n = 1)
    double rotation_speed = 0.0;   // fitted focal-circle speed c*
    double rotation_period_err = 0.0;  // | 2 pi / c* - 4 pi / k1^2 |
    double velocity_null_residual = 0.0;
    std::vector<Vec> focal_points;
};

// Focal-set diagnostics at distance pi / k1 from the reference orbit:
// degenerate exponential directions, vanishing shape operator, Reeb
// tangency, J-invariance and the covering multiplicity.
EqualityDiagnostics equality_diagnostics(const ManifoldHandle& M, double k1, uint64_t seed,
                                         int focal_samples = 24, int threads = 1);

}  // namespace cclab

#endif
