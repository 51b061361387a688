#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace geoprobe {

inline unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates fn(i) for i in [0, count) and returns the results in index order.
/// The first exception (by index) is rethrown after all workers finish.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
    std::vector<Result> out(count);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }

    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::size_t> error_index(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();

    std::size_t first = count;
    std::exception_ptr err;
    for (unsigned w = 0; w < threads; ++w) {
        if (errors[w] && error_index[w] < first) {
            first = error_index[w];
            err = errors[w];
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace geoprobe
