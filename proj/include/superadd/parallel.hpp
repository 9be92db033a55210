#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace superadd {

/// Worker count: SUPERADD_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
inline unsigned default_thread_count() {
    if (const char *env = std::getenv("SUPERADD_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) {
                return static_cast<unsigned>(n);
            }
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

template <typename Task>
void run_pool(std::size_t n, unsigned threads, Task &&task) {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < n; i = next++) {
                        task(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = n;
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace detail

/// Evaluates fn(0..n-1) on up to `threads` workers and returns the results
/// in index order. The first exception thrown by any task is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, Fn &&fn, unsigned threads = default_thread_count())
    -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<std::optional<T>> slots(n);
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            slots[i].emplace(fn(i));
        }
    } else {
        detail::run_pool(n, threads, [&](std::size_t i) { slots[i].emplace(fn(i)); });
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace superadd
