#ifndef CCLAB_PARALLEL_HPP
#define CCLAB_PARALLEL_HPP

#include <functional>
#include <thread>
#include <vector>

namespace cclab {

inline int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Work items must be independent; each item
// writes only to its own slot, so results are identical for any thread count.
inline void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    const int nt = static_cast<int>(std::min<long>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nt));
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            for (long i = w; i < count; i += nt) fn(i);
        });
    for (auto& th : pool) th.join();
}

// Deterministic pairwise summation; the result does not depend on how the
// terms were produced, only on their index order.
inline double pairwise_sum(const std::vector<double>& xs, size_t lo, size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += xs[i];
        return s;
    }
    const size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

inline double pairwise_sum(const std::vector<double>& xs) { return pairwise_sum(xs, 0, xs.size()); }

}  // namespace cclab

#endif
