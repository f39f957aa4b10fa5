#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace affinedim {

// Worker count: AFFINEDIM_THREADS caps hardware concurrency.
inline int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("AFFINEDIM_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

// Static block partition of [0, n).  Work must be order-independent; results
// indexed by absolute position stay deterministic regardless of thread count.
inline void parallel_for(long n, const std::function<void(long, long)>& body) {
    int workers = worker_count();
    if (workers <= 1 || n < 1024) {
        body(0, n);
        return;
    }
    std::vector<std::thread> threads;
    long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long lo = w * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace affinedim
