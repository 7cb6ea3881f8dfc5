#ifndef PVI_PARALLEL_HPP
#define PVI_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pvi
{

/// 0 means one worker per hardware thread.
inline int resolve_threads(int threads)
{
    if (threads > 0) {
        return threads;
    }
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : int(h);
}

/// Calls f(i) for i in [0, n) on up to `threads` workers. Callers write results
/// into pre-sized slots indexed by i, so the output order never depends on
/// scheduling. The first exception thrown by any f(i) is rethrown here.
template <typename F>
void parallel_for(std::size_t n, int threads, F &&f)
{
    const std::size_t workers = std::min<std::size_t>(std::size_t(resolve_threads(threads)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                return;
            }
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) {
        pool.emplace_back(run);
    }
    run();
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace pvi

#endif
