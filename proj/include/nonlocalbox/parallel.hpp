#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace nlb {

// Worker cap from NONLOCALBOX_THREADS; unset, empty or 0 means
// "use the hardware concurrency".
inline unsigned thread_cap() {
    const char* env = std::getenv("NONLOCALBOX_THREADS");
    if (env && *env) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(begin, end) over [0, n) split into contiguous blocks.
// Callers that need deterministic results must write into
// index-addressed slots and reduce in index order afterwards.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn,
                         unsigned max_threads = 0) {
    if (n == 0)
        return;
    unsigned t = max_threads ? std::min(max_threads, thread_cap()) : thread_cap();
    t = static_cast<unsigned>(std::min<std::size_t>(t, n));
    if (t <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::size_t chunk = (n + t - 1) / t;
    for (unsigned i = 0; i < t; ++i) {
        std::size_t b = std::min(n, static_cast<std::size_t>(i) * chunk);
        std::size_t e = std::min(n, b + chunk);
        if (b < e)
            pool.emplace_back(fn, b, e);
    }
    for (auto& th : pool)
        th.join();
}

} // namespace nlb
