#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace frobstat {

// 0 means "use hardware concurrency"
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs body(i) for i in [0, n). Work is handed out dynamically, so callers
// must write into per-index slots and reduce in index order afterwards.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    unsigned t = thread_count();
    if (t <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (t > n) t = (unsigned)n;
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// Neumaier compensated accumulator.
template <class T>
struct compensated_sum {
    T sum{0}, c{0};
    void add(T x) {
        T t = sum + x;
        if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    T value() const { return sum + c; }
};

}  // namespace frobstat
