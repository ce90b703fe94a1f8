#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace solitonforge {

/// Runs fn(i) for i in [0, count) on a small worker pool. Workers grab
/// contiguous chunks; callers write results into pre-sized slots indexed by i,
/// so the merged output is deterministic regardless of scheduling. The first
/// exception thrown by any worker is rethrown on the calling thread.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned workers = 0) {
    if (count == 0) return;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t chunk = 64;
    if (workers <= 1 || count <= chunk) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::mutex mtx;
    std::size_t next = 0;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            std::size_t begin, end;
            {
                std::scoped_lock lock(mtx);
                if (err || next >= count) return;
                begin = next;
                end = std::min(count, begin + chunk);
                next = end;
            }
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::scoped_lock lock(mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace solitonforge
