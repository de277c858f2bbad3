#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace wse {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Indices are
/// split into contiguous static chunks; fn must not touch state shared
/// across indices. The first exception thrown by any worker is rethrown.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    std::size_t workers = threads <= 1 ? 1 : std::min<std::size_t>(threads, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
        std::size_t begin = t * chunk;
        std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace wse
