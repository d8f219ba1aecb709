#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "levypot/philox.hpp"

namespace levypot {

// Runs n paths in fixed-size batches on `threads` workers. Path i always uses
// stream first_path + i, each batch accumulates into its own copy of `proto`,
// and batches are merged in index order, so the result does not depend on
// the thread count.
template <class Acc, class PathFn>
Acc run_paths(std::uint64_t n, std::uint64_t seed, int threads, std::uint64_t first_path, const Acc& proto,
              PathFn&& path) {
    constexpr std::uint64_t kBatch = 2048;
    const std::uint64_t batches = (n + kBatch - 1) / kBatch;
    std::vector<Acc> parts(batches, proto);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::uint64_t b; (b = next.fetch_add(1)) < batches;) {
                const std::uint64_t end = std::min(n, (b + 1) * kBatch);
                for (std::uint64_t i = b * kBatch; i < end; ++i) {
                    Philox rng(seed, first_path + i);
                    path(rng, parts[b]);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = batches;
        }
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::uint64_t>(batches, 1))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    Acc total = proto;
    for (const auto& p : parts) total.merge(p);
    return total;
}

} // namespace levypot
