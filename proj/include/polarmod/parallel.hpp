/*
Deterministic chunked parallelism: results must not depend on the worker
count, so items carry their own substreams and chunk results are merged in
index order by the caller.
*/

#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace polarmod {

// Runs fn(begin, end) over a partition of [0, total) using up to `workers`
// threads. Chunks are contiguous and cover the range exactly once.
template <class Fn>
void parallel_chunks(std::size_t total, unsigned workers, Fn&& fn) {
    if (total == 0) return;
    workers = std::max(1u, workers);
    const std::size_t nchunks = std::min<std::size_t>(workers, total);
    if (nchunks == 1) {
        fn(std::size_t{0}, total);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(nchunks);
    const std::size_t base = total / nchunks;
    const std::size_t extra = total % nchunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t len = base + (c < extra ? 1 : 0);
        threads.emplace_back([&fn, begin, len] { fn(begin, begin + len); });
        begin += len;
    }
    for (auto& t : threads) t.join();
}

inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace polarmod
