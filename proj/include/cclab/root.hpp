#ifndef CCLAB_ROOT_HPP
#define CCLAB_ROOT_HPP

#include <functional>

namespace cclab {

// Brent's method on a bracketing interval. Requires f(lo) and f(hi) of
// opposite sign; returns the root to xtol absolute.
double find_root(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-10,
                 int max_iter = 200);

// First sign change of f on [lo, hi] scanned over `cells` subintervals, then
// polished with find_root. Throws if no sign change is found.
double first_root_scan(const std::function<double(double)>& f, double lo, double hi, int cells,
                       double xtol = 1e-10);

}  // namespace cclab

#endif
