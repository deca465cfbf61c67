// Bounded-worker parallel sweep. Results are written into caller-owned
// slots indexed by iteration, so output order never depends on scheduling.
#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace symlab {

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, n). workers <= 1 runs inline.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         int workers = 0) {
    if (workers <= 0) workers = default_workers();
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int nw = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failed.load() && err) std::rethrow_exception(err);
}

}  // namespace symlab
