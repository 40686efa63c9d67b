#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace slicemkt::detail {

inline int resolve_threads(int requested, std::size_t jobs) {
    if (jobs == 0) return 1;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    int t = requested > 0 ? requested : hw;
    if (static_cast<std::size_t>(t) > jobs) t = static_cast<int>(jobs);
    return std::max(t, 1);
}

/// Run body(i) for i in [0, n). Work is handed out by an atomic-free block
/// partition, so the set of indices each worker runs is a pure function of
/// (n, threads); results must be written to preallocated slots by index.
/// The first exception (by worker order) is rethrown.
template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (n == 0) return;
    const int t = resolve_threads(threads, n);
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(t));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = static_cast<std::size_t>(w); i < n;
                     i += static_cast<std::size_t>(t))
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace slicemkt::detail
