#ifndef BOHMLAB_PARALLEL_HPP
#define BOHMLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace bohmlab {

// Work is always split into the same fixed chunk layout no matter how many
// threads execute it, so reductions merged in chunk order are bit-identical
// for any worker count.
constexpr std::size_t kFixedChunks = 64;

inline std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

// Runs fn(chunk_index, begin, end) over kFixedChunks contiguous index ranges.
inline void parallel_chunks(std::size_t count, std::size_t n_threads,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    const std::size_t chunks = count < kFixedChunks ? (count > 0 ? count : 0) : kFixedChunks;
    if (chunks == 0) return;
    const std::size_t per = (count + chunks - 1) / chunks;

    n_threads = resolve_threads(n_threads);
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            const std::size_t b = c * per;
            const std::size_t e = std::min(count, b + per);
            if (b < e) fn(c, b, e);
        }
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                const std::size_t b = c * per;
                const std::size_t e = std::min(count, b + per);
                if (b < e) fn(c, b, e);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace bohmlab

#endif
