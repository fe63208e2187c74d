#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace specrad {
namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Work is
// handed out through an atomic counter, so the schedule varies, but each
// index is processed exactly once; callers must make fn(i) depend only on
// i (one RngStream per index) and write to slot i of a preallocated
// buffer. That keeps results bit-identical across thread counts. The
// first exception thrown by any worker is rethrown on the caller.
template <typename Fn>
void run_indexed(std::uint64_t count, unsigned threads, Fn&& fn) {
    if (count == 0) {
        return;
    }
    unsigned workers = threads == 0 ? 1u : threads;
    if (static_cast<std::uint64_t>(workers) > count) {
        workers = static_cast<unsigned>(count);
    }
    if (workers == 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::atomic_flag error_claim = ATOMIC_FLAG_INIT;
    auto worker = [&]() {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count || failed.load(std::memory_order_relaxed)) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                if (!error_claim.test_and_set()) {
                    first_error = std::current_exception();
                }
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace detail
} // namespace specrad
