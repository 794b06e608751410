#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <functional>
#include <thread>
#include <vector>

namespace tracemix {

// Runs fn(0..n-1) across hardware threads. Callers must keep the bodies
// free of shared mutable state (in particular: no rng draws, no bus
// publishes); results determinism then does not depend on scheduling.
// The first exception thrown by any body is rethrown on the caller.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    size_t workers = std::min<size_t>(std::thread::hardware_concurrency(), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (size_t w = 0; w + 1 < workers; ++w) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace tracemix
