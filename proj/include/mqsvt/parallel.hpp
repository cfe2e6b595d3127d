#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mqsvt {

/// Runs fn(0..count-1), each task seeded independently by its index,
/// and reduces the per-index results by pairwise summation in index
/// order. The result is bit-identical for any worker count.
template <typename T>
T parallel_map_reduce(std::int64_t count, int workers, const std::function<T(std::int64_t)>& fn,
                      const std::function<T(const T&, const T&)>& combine) {
    std::vector<T> results(static_cast<std::size_t>(count));
    if (workers <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> next{0};
        const int nthreads = std::min<std::int64_t>(workers, count);
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::int64_t i = next.fetch_add(1);
                    if (i >= count) break;
                    results[static_cast<std::size_t>(i)] = fn(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    // pairwise tree sum, order fixed by index
    std::vector<T> level = std::move(results);
    while (level.size() > 1) {
        std::vector<T> up;
        up.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(combine(level[i], level[i + 1]));
        if (level.size() % 2) up.push_back(level.back());
        level = std::move(up);
    }
    return level.empty() ? T{} : level.front();
}

}  // namespace mqsvt
