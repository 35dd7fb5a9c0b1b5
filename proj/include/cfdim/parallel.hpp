#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cfdim {

/// Runs fn(chunk) for chunk = 0..nchunks-1, possibly on several threads.
/// The chunk decomposition is fixed by the caller and never depends on the
/// thread count, so a caller that combines per-chunk results in index order
/// gets output independent of `threads`.
template <typename Fn>
void run_chunks(std::size_t nchunks, int threads, Fn&& fn) {
    if (threads <= 1 || nchunks <= 1) {
        for (std::size_t i = 0; i < nchunks; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= nchunks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), nchunks);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace cfdim
