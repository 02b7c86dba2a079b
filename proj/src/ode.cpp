#include "cclab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cclab {

std::vector<double> linspace(double a, double b, int count) {
    if (count < 2) return {b};
    std::vector<double> t(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) t[static_cast<size_t>(i)] = a + (b - a) * i / (count - 1);
    t.back() = b;
    return t;
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order weights minus the embedded 4th-order ones.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdeSolution integrate_ode(const std::vector<double>& y0, const OdeRhs& rhs, double t0, double t1,
                          std::span<const double> sample_times, const OdeOptions& opts,
                          const OdeMonitor& monitor, const OdeOnAccept& on_accept) {
    if (!(t0 < t1)) throw std::invalid_argument("integrate_ode: need t0 < t1");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
        throw std::invalid_argument("integrate_ode: tolerances must be positive");

    const size_t n = y0.size();
    std::vector<double> y = y0, ynew(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n);

    OdeSolution sol;
    sol.t.reserve(sample_times.size());
    sol.y.reserve(sample_times.size());

    bool bad_rhs = false;
    auto eval = [&](double tt, const std::vector<double>& state, std::vector<double>& out) {
        rhs(tt, state.data(), out.data());
        ++sol.rhs_evals;
        for (size_t i = 0; i < n; ++i)
            if (!std::isfinite(out[i])) {
                bad_rhs = true;
                return;
            }
    };

    double t = t0;
    size_t next_sample = 0;
    auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-13 * std::fmax(1.0, std::fabs(b)); };
    auto record_reached = [&](double tt, const std::vector<double>& state) {
        while (next_sample < sample_times.size() &&
               (sample_times[next_sample] < tt || near(sample_times[next_sample], tt))) {
            sol.t.push_back(sample_times[next_sample]);
            sol.y.push_back(state);
            ++next_sample;
        }
    };
    record_reached(t, y);

    const double span = t1 - t0;
    const double h_max = opts.h_max > 0 ? opts.h_max : span;

    eval(t, y, k1);
    if (bad_rhs) {
        sol.reason = "non-finite right-hand side at start";
        sol.end_time = t;
        return sol;
    }

    double h = opts.h_init;
    if (h <= 0) {
        // crude |y|/|dy| heuristic with safety clamps
        double ny = opts.atol, nd = opts.atol;
        for (size_t i = 0; i < n; ++i) {
            ny += y[i] * y[i];
            nd += k1[i] * k1[i];
        }
        h = std::clamp(0.01 * std::sqrt(ny / nd), 1e-8 * span, 0.1 * span);
    }

    auto check_stop = [&](double tt) -> bool {
        if (monitor) {
            const double v = monitor(tt, y.data());
            if (!(v < opts.monitor_cap)) {
                sol.blew_up = true;
                sol.reason = "monitored scalar exceeded cap";
                return true;
            }
        }
        return false;
    };
    if (check_stop(t)) {
        sol.end_time = t;
        return sol;
    }

    while (t < t1 && !near(t, t1)) {
        if (++sol.steps > opts.max_steps) {
            sol.reason = "max step count reached";
            break;
        }
        h = std::fmin(h, h_max);
        if (t + h > t1) h = t1 - t;
        // land exactly on the next requested sample
        if (next_sample < sample_times.size() && t + h > sample_times[next_sample] - 1e-14)
            h = sample_times[next_sample] - t;
        if (h < opts.h_min) {
            sol.blew_up = true;
            sol.reason = "step size underflow";
            break;
        }

        auto comb = [&](std::vector<double>& out, std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
            for (size_t i = 0; i < n; ++i) {
                double s = y[i];
                for (const auto& [c, kv] : terms) s += h * c * (*kv)[i];
                out[i] = s;
            }
        };

        comb(stage, {{a21, &k1}});
        eval(t + c2 * h, stage, k2);
        comb(stage, {{a31, &k1}, {a32, &k2}});
        eval(t + c3 * h, stage, k3);
        comb(stage, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        eval(t + c4 * h, stage, k4);
        comb(stage, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        eval(t + c5 * h, stage, k5);
        comb(stage, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        eval(t + h, stage, k6);
        comb(ynew, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        eval(t + h, ynew, k7);
        if (bad_rhs) {
            // retry with a smaller step; blow-up if it keeps failing
            bad_rhs = false;
            h *= 0.25;
            if (h < opts.h_min) {
                sol.blew_up = true;
                sol.reason = "non-finite right-hand side";
                break;
            }
            continue;
        }

        double errnorm = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::fmax(std::fabs(y[i]), std::fabs(ynew[i]));
            const double q = e / sc;
            errnorm += q * q;
        }
        errnorm = std::sqrt(errnorm / static_cast<double>(n));

        if (errnorm <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL
            if (on_accept) {
                on_accept(sol.steps, t, y.data());
                // state may have been adjusted; refresh the FSAL derivative
                eval(t, y, k1);
            }
            record_reached(t, y);
            if (check_stop(t)) break;
        }
        const double factor = errnorm > 0 ? 0.9 * std::pow(errnorm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }

    sol.end_time = t;
    if (near(t, t1) || t >= t1) {
        sol.completed = true;
        record_reached(t1, y);
    }
    return sol;
}

}  // namespace cclab
