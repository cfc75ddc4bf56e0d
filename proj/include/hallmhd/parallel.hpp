#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace hallmhd {

/// Run fn(begin, end) over [0, count) split into contiguous chunks, one per worker.
/// Chunk boundaries depend only on (count, threads), and each element is written by
/// exactly one worker, so results are bitwise identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (threads <= 1 || count < 4096) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t nt = static_cast<std::size_t>(threads);
    const std::size_t chunk = (count + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t w = 0; w < nt; ++w) {
        const std::size_t begin = w * chunk;
        if (begin >= count) break;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool) th.join();
}

} // namespace hallmhd
