#ifndef HILL_PARALLEL_HPP
#define HILL_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hill {

// Worker count: min(hardware, HILL_THREADS). HILL_THREADS=1 disables
// parallelism entirely.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("HILL_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw)
            hw = static_cast<unsigned>(cap);
    }
    return hw;
}

// Index-parallel loop; body(i) must write only to slot i of caller-owned
// storage so the merged result is order-independent.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const unsigned workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(
        std::min<std::size_t>(workers, n));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hill

#endif
