#ifndef CCLAB_OPTIM_HPP
#define CCLAB_OPTIM_HPP

#include <functional>
#include <utility>
#include <vector>

namespace cclab {

// Derivative-free Nelder-Mead descent; deterministic. x is updated in place,
// returns the best objective value found.
inline double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double>& x, double step, int iters, double stop_below = 1e-14) {
    const size_t d = x.size();
    std::vector<std::vector<double>> pts(d + 1, x);
    std::vector<double> fv(d + 1);
    for (size_t i = 1; i <= d; ++i) pts[i][i - 1] += step;
    for (size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);
    for (int it = 0; it < iters; ++it) {
        for (size_t i = 0; i <= d; ++i)
            for (size_t j = i + 1; j <= d; ++j)
                if (fv[j] < fv[i]) {
                    std::swap(fv[i], fv[j]);
                    std::swap(pts[i], pts[j]);
                }
        if (fv[0] < stop_below) break;
        std::vector<double> cen(d, 0.0);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) cen[j] += pts[i][j];
        for (size_t j = 0; j < d; ++j) cen[j] /= static_cast<double>(d);
        auto blend = [&](double c) {
            std::vector<double> p(d);
            for (size_t j = 0; j < d; ++j) p[j] = cen[j] + c * (pts[d][j] - cen[j]);
            return p;
        };
        auto refl = blend(-1.0);
        const double fr = f(refl);
        if (fr < fv[0]) {
            auto ex = blend(-2.0);
            const double fe = f(ex);
            if (fe < fr) {
                pts[d] = ex;
                fv[d] = fe;
            } else {
                pts[d] = refl;
                fv[d] = fr;
            }
        } else if (fr < fv[d - 1]) {
            pts[d] = refl;
            fv[d] = fr;
        } else {
            auto con = blend(0.5);
            const double fc = f(con);
            if (fc < fv[d]) {
                pts[d] = con;
                fv[d] = fc;
            } else {
                for (size_t i = 1; i <= d; ++i) {
                    for (size_t j = 0; j < d; ++j) pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    size_t best = 0;
    for (size_t i = 1; i <= d; ++i)
        if (fv[i] < fv[best]) best = i;
    x = pts[best];
    return fv[best];
}

// Golden-section minimization of a unimodal scalar function on [lo, hi].
inline std::pair<double, double> golden_min(const std::function<double(double)>& f, double lo, double hi,
                                            int iters = 60) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace cclab

#endif
