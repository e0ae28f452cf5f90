#pragma once

#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace wanewave {

/// Worker count: jobs if positive, else WANEWAVE_JOBS, else hardware threads.
inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("WANEWAVE_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(0..n-1) across workers.  Results keyed by index stay deterministic
/// regardless of scheduling.  Exceptions must be handled inside fn.
inline void parallel_for_index(std::size_t n, int jobs,
                               const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(resolve_jobs(jobs), n == 0 ? 1 : n);
    if (workers <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t k = static_cast<std::size_t>(w); k < n;
                 k += static_cast<std::size_t>(workers))
                fn(k);
        });
    }
    for (std::thread& t : pool) t.join();
}

} // namespace wanewave
