#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace covertsim {

/// Calls body(i) for i in [0, count) on up to `workers` threads, each taking a
/// contiguous chunk. Results must be written to per-index slots so the outcome
/// does not depend on the worker count. The first exception is rethrown.
template <class Body>
void parallel_for(std::int64_t count, unsigned workers, Body&& body)
{
    if (count <= 0)
        return;
    const auto threads = static_cast<std::int64_t>(std::max(1u, workers));
    if (threads == 1 || count == 1) {
        for (std::int64_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    const std::int64_t used = std::min(threads, count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(used));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(used));
    for (std::int64_t w = 0; w < used; ++w) {
        const std::int64_t begin = count * w / used;
        const std::int64_t end = count * (w + 1) / used;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::int64_t i = begin; i < end; ++i)
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace covertsim
