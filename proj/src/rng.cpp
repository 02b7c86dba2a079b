#include "cclab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cclab {

double SplitMix64::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on open (0,1)
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

std::vector<Vec> sphere_sample(int dim, int count, uint64_t seed, SphereMode mode) {
    if (dim < 1) throw std::invalid_argument("sphere_sample: dim must be >= 1");
    if (count < 1) throw std::invalid_argument("sphere_sample: count must be >= 1");
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(count));
    if (mode == SphereMode::equispaced) {
        if (dim != 1) throw std::invalid_argument("sphere_sample: equispaced mode needs dim == 1");
        for (int i = 0; i < count; ++i) {
            const double th = 6.283185307179586476925286766559 * i / count;
            Vec v(2);
            v[0] = std::cos(th);
            v[1] = std::sin(th);
            out.push_back(v);
        }
        return out;
    }
    SplitMix64 rng(seed);
    const int amb = dim + 1;
    for (int i = 0; i < count; ++i) {
        Vec v(amb);
        double nn = 0.0;
        do {
            for (int j = 0; j < amb; ++j) v[j] = rng.normal();
            nn = norm(v);
        } while (nn < 1e-8);
        v *= 1.0 / nn;
        out.push_back(v);
    }
    return out;
}

}  // namespace cclab
