#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace wosnet {

// Runs fn(i) for i in [0, n). Work items must be independent and write only
// to their own slots; reductions happen after the join, in index order, so
// results do not depend on the thread count.
inline void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (threads <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int nt = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (long i = t; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wosnet
