#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ruloff {

// Parallelism cap: RULOFF_THREADS env var when set, hardware concurrency otherwise.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("RULOFF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Deterministic chunked parallel loop: fn(i) for i in [0, n); each index is
// written by exactly one worker, so output ordering never depends on scheduling.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    unsigned workers = std::min<size_t>(thread_budget(), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace ruloff
