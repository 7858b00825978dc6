#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ciporter {

/// Runs fn(0..count-1) across up to `workers` threads. fn must synchronize
/// its own writes; indices are claimed atomically.
template <typename Fn>
void for_each_parallel(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < count; i = next.fetch_add(1))
            fn(i);
    };
    std::vector<std::thread> threads;
    const auto spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    threads.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t)
        threads.emplace_back(worker);
    for (auto& thread : threads)
        thread.join();
}

}  // namespace ciporter
