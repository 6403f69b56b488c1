#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace netcox {

/// Runs fn(i) for i in [0, n) on up to nThreads workers. Results must be
/// written to disjoint slots; scheduling is static so runs are deterministic.
inline void parallel_for(int n, int nThreads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    nThreads = std::max(1, std::min(nThreads, n));
    if (nThreads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nThreads);
    for (int t = 0; t < nThreads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nThreads) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace netcox
