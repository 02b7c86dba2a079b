#ifndef CCLAB_RNG_HPP
#define CCLAB_RNG_HPP

#include <cstdint>
#include <vector>

#include "cclab/mat.hpp"

namespace cclab {

// splitmix64; reproducible across runs and platforms for a given seed.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal();

    // decorrelated stream for worker i; deterministic in (seed, i)
    static uint64_t substream(uint64_t seed, uint64_t i) {
        SplitMix64 g(seed ^ (0x6a09e667f3bcc909ULL + i * 0x9e3779b97f4a7c15ULL));
        return g.next();
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class SphereMode { random, equispaced };

// Unit vectors on S^dim in R^{dim+1}. Equispaced mode is defined for the
// circle (dim = 1) only and starts at (1, 0) going counterclockwise.
std::vector<Vec> sphere_sample(int dim, int count, uint64_t seed, SphereMode mode = SphereMode::random);

}  // namespace cclab

#endif
