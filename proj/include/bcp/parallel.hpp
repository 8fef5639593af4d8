#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bcp {

/// Thread count from BCP_THREADS, else hardware concurrency (at least 1).
int default_thread_count();

/// Work is cut into fixed-size blocks whose boundaries depend only on the
/// item count, never on the thread count. Results come back in block order so
/// any reduction over them is reproducible bit-for-bit.
inline constexpr std::size_t kBlockSize = 1024;

inline std::size_t block_count(std::size_t n_items, std::size_t block_size = kBlockSize) {
    return (n_items + block_size - 1) / block_size;
}

/// Runs fn(begin, end) for each block and returns the per-block results.
template <class Fn>
auto run_blocks(std::size_t n_items, int threads, Fn&& fn, std::size_t block_size = kBlockSize) {
    using Result = decltype(fn(std::size_t{}, std::size_t{}));
    const std::size_t n_blocks = block_count(n_items, block_size);
    std::vector<Result> out(n_blocks);
    if (n_blocks == 0) return out;

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            const std::size_t begin = b * block_size;
            const std::size_t end = std::min(n_items, begin + block_size);
            try {
                out[b] = fn(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_blocks);
            }
        }
    };

    const std::size_t n_threads =
        std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1, n_blocks);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Pairwise sum, fixed association order for a given input length.
double pairwise_sum(const double* data, std::size_t n);

template <class Range>
double pairwise_sum(const Range& r) {
    return pairwise_sum(std::data(r), std::size(r));
}

}  // namespace bcp
