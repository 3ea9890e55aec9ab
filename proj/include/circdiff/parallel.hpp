#ifndef CIRCDIFF_PARALLEL_HPP
#define CIRCDIFF_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace circdiff {

/// Runs fn(i) for i in [0, n) across `workers` threads (0: hardware
/// concurrency). Work items must write to disjoint slots; the first exception
/// thrown by any item is rethrown after all threads join.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int nw = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (nw < 1) nw = 1;
    nw = std::min(nw, n);
    if (nw == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace circdiff

#endif  // CIRCDIFF_PARALLEL_HPP
