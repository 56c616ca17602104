// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_PARALLEL_H
#define BSRT_PARALLEL_H

// Minimal fork-join parallel loop. Work items must be independent; each
// index is executed exactly once. Results must not depend on scheduling —
// all bsrt uses write disjoint slots or reduce deterministically afterwards.

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace bsrt {

inline void ParallelFor(int64_t begin, int64_t end,
                        const std::function<void(int64_t)>& fn, int nThreads = 0) {
    if (end <= begin) return;
    if (nThreads <= 0) nThreads = int(std::thread::hardware_concurrency());
    nThreads = std::max(1, std::min<int>(nThreads, int(end - begin)));
    if (nThreads == 1) {
        for (int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{begin};
    auto worker = [&] {
        for (;;) {
            int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= end) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nThreads - 1);
    for (int t = 1; t < nThreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace bsrt

#endif  // BSRT_PARALLEL_H
