#ifndef CCLAB_ODE_HPP
#define CCLAB_ODE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cclab {

// dy/dt = f(t, y); y and dy have the problem dimension.
using OdeRhs = std::function<void(double t, const double* y, double* dy)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 0.0;       // 0 = choose automatically
    double h_min = 1e-13;      // underflow below this signals blow-up/stiffness
    double h_max = 0.0;        // 0 = span
    double monitor_cap = 1e8;  // monitored scalar above this signals blow-up
    long max_steps = 4000000;
};

struct OdeSolution {
    std::vector<double> t;               // requested sample times actually reached
    std::vector<std::vector<double>> y;  // states at those times
    bool completed = false;              // reached the end of the span
    bool blew_up = false;
    double end_time = 0.0;  // last accepted time
    std::string reason;     // set when the integration stopped early
    long steps = 0;
    long rhs_evals = 0;
};

// Scalar watched for blow-up; checked after every accepted step.
using OdeMonitor = std::function<double(double t, const double* y)>;

// Invoked after every accepted step; may adjust the state in place
// (e.g. frame re-orthonormalization).
using OdeOnAccept = std::function<void(long step, double t, double* y)>;

// Adaptive embedded Dormand-Prince 5(4). Sample times must lie in [t0, t1]
// and be increasing; steps are clamped so each one is hit exactly.
OdeSolution integrate_ode(const std::vector<double>& y0, const OdeRhs& rhs, double t0, double t1,
                          std::span<const double> sample_times, const OdeOptions& opts = {},
                          const OdeMonitor& monitor = {}, const OdeOnAccept& on_accept = {});

std::vector<double> linspace(double a, double b, int count);

}  // namespace cclab

#endif
