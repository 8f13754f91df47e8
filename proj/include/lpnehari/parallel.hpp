#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lpnehari {

/// Worker cap for restart sweeps: LPNEHARI_THREADS if set (>=1), otherwise
/// the hardware concurrency.  Results never depend on the cap; it only
/// bounds how many independent restarts run at once.
inline int thread_cap() {
    if (const char* env = std::getenv("LPNEHARI_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
            // fall through to the default below
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs f(0), ..., f(n-1) on up to thread_cap() workers.  f must only touch
/// per-index state; reductions happen after the join, in index order, so the
/// outcome is deterministic regardless of scheduling.
template <class F>
inline void parallel_for(int n, F&& f) {
    const int workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace lpnehari
