#include "cclab/root.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cclab {

namespace {

double brent(const std::function<double(double)>& f, double lo, double hi, double fa0, double fb0,
             double xtol, int max_iter);

}  // namespace

double find_root(const std::function<double(double)>& f, double lo, double hi, double xtol, int max_iter) {
    double fa = f(lo), fb = f(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if ((fa > 0) != (fb > 0)) return brent(f, lo, hi, fa, fb, xtol, max_iter);
    // endpoints agree in sign: bracket the first interior sign change
    constexpr int cells = 256;
    double prev_t = lo, prev_f = fa;
    for (int i = 1; i <= cells; ++i) {
        const double t = lo + (hi - lo) * i / cells;
        const double ft = f(t);
        if (ft == 0.0) return t;
        if ((prev_f > 0) != (ft > 0)) return brent(f, prev_t, t, prev_f, ft, xtol, max_iter);
        prev_t = t;
        prev_f = ft;
    }
    throw std::invalid_argument("find_root: no sign change over bracket");
}

namespace {

double brent(const std::function<double(double)>& f, double lo, double hi, double fa0, double fb0,
             double xtol, int max_iter) {
    double a = lo, b = hi;
    double fa = fa0, fb = fb0;

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic / secant
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw std::runtime_error("find_root: max iterations exceeded");
}

}  // namespace

double first_root_scan(const std::function<double(double)>& f, double lo, double hi, int cells, double xtol) {
    double prev_t = lo, prev_f = f(lo);
    if (prev_f == 0.0) return lo;
    for (int i = 1; i <= cells; ++i) {
        const double t = lo + (hi - lo) * i / cells;
        const double ft = f(t);
        if (ft == 0.0) return t;
        if ((prev_f > 0) != (ft > 0)) return brent(f, prev_t, t, prev_f, ft, xtol, 200);
        prev_t = t;
        prev_f = ft;
    }
    throw std::runtime_error("first_root_scan: no sign change in window");
}

}  // namespace cclab
