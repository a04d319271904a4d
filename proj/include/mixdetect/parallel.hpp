#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace mixdetect {

// Worker cap: hardware concurrency, clamped by the MIXDETECT_THREADS
// environment variable when set.
int worker_count();

// Runs body(i) for i in [begin, end), statically chunked across workers.
// body must only touch state indexed by its own i; results land in
// caller-owned slots so the outcome is independent of scheduling.
template <class Body>
void parallel_for(std::int64_t begin, std::int64_t end, Body&& body) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    const int workers = worker_count();
    if (workers <= 1 || count == 1) {
        for (std::int64_t i = begin; i < end; ++i) body(i);
        return;
    }
    const std::int64_t chunks = std::min<std::int64_t>(workers, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunks));
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t lo = begin + count * c / chunks;
        const std::int64_t hi = begin + count * (c + 1) / chunks;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace mixdetect
