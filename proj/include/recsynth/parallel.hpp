#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace recsynth {

/// Worker count: explicit request, else the RECSYNTH_THREADS cap, else the
/// hardware count. Thread count only affects speed; every parallel loop in
/// this project draws from per-entity substreams, so results never depend
/// on how work is sliced.
inline unsigned resolve_thread_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RECSYNTH_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(worker, i) for i in [begin, end), chunked over `threads`
/// workers. The first exception thrown by any worker is rethrown on the
/// caller.
template <typename Fn>
void parallel_for_workers(std::size_t begin, std::size_t end, unsigned threads, Fn&& fn) {
    const std::size_t n = end - begin;
    if (n == 0) return;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads ? threads : 1, n));
    if (threads <= 1) {
        for (std::size_t i = begin; i < end; ++i) fn(0u, i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = begin + t * chunk;
        std::size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(t, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

template <typename Fn>
void parallel_for(std::size_t begin, std::size_t end, unsigned threads, Fn&& fn) {
    parallel_for_workers(begin, end, threads, [&](unsigned, std::size_t i) { fn(i); });
}

}  // namespace recsynth
