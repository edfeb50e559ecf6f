#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace owslab_cli {

// Runs fn(0..count-1) across `jobs` workers. Each index owns its slot in the
// caller's result vector, so aggregation order never depends on scheduling.
inline void parallel_for_indexed(std::size_t count, unsigned jobs,
                                 const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const unsigned spawn = std::min<unsigned>(jobs, static_cast<unsigned>(count));
    workers.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : workers) t.join();
}

}  // namespace owslab_cli
