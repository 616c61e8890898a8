// Deterministic fork-join helper. MBRLAB_THREADS caps the worker count
// (0 or unset means hardware concurrency); results never depend on the
// schedule because every chunk writes its own slots.
#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace mbrlab {

inline int thread_budget() {
    if (const char* env = std::getenv("MBRLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int workers = std::min<std::size_t>(std::size_t(thread_budget()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = std::size_t(w); i < count; i += std::size_t(workers)) body(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace mbrlab
