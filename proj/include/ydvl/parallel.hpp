#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ydvl {

// Worker count: hardware concurrency capped by the YDVL_THREADS environment
// variable. Every parallel region in the library partitions work into
// disjoint output ranges and combines per-chunk results in a fixed order, so
// results are bitwise identical for any cap value.
inline int thread_cap() {
    static const int cap = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("YDVL_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) hw = std::min<long>(hw, v);
        }
        return hw;
    }();
    return cap;
}

// Runs fn(chunk_index, begin, end) over a contiguous partition of [0, count).
// Chunk boundaries depend only on count and n_chunks, never on thread timing.
inline void parallel_chunks(long count,
                            const std::function<void(int, long, long)>& fn) {
    if (count <= 0) return;
    int n_chunks = static_cast<int>(std::min<long>(thread_cap(), count));
    if (n_chunks <= 1) {
        fn(0, 0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_chunks);
    const long base = count / n_chunks, rem = count % n_chunks;
    long begin = 0;
    for (int c = 0; c < n_chunks; ++c) {
        const long end = begin + base + (c < rem ? 1 : 0);
        pool.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

// Runs a fixed list of independent tasks, possibly concurrently. Task index
// identifies results; nothing is shared between tasks.
inline void parallel_tasks(std::vector<std::function<void()>> tasks) {
    const int cap = thread_cap();
    if (cap <= 1 || tasks.size() <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::vector<std::thread> pool;
    const int workers = static_cast<int>(std::min<size_t>(cap, tasks.size()));
    pool.reserve(workers);
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                tasks[i]();
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ydvl
