#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cdt {

/// Worker-thread cap: CDT_THREADS if set (>= 1), else hardware concurrency.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("CDT_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Order-preserving parallel map over an index range; results are assembled
/// deterministically regardless of scheduling.
template <typename F>
auto parallel_map(size_t count, F&& f) {
    using R = decltype(f(size_t{0}));
    std::vector<R> out(count);
    const unsigned workers = std::min<size_t>(thread_cap(), count ? count : 1);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace cdt
