#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace funcmark {

// Global worker count for parallel_for; 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Splits [begin, end) into contiguous chunks, one per worker. Results must be
// written to preallocated slots so output is independent of scheduling.
template <typename Fn>
void parallel_for(size_t begin, size_t end, Fn&& fn) {
    size_t n = end > begin ? end - begin : 0;
    if (n == 0) return;
    size_t workers = static_cast<size_t>(thread_count());
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (size_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    size_t chunk = (n + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        size_t lo = begin + w * chunk;
        size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace funcmark
