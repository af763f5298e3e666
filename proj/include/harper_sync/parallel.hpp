#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace harper {

/// Worker count from HARPER_SYNC_THREADS, else hardware concurrency (>= 1).
unsigned default_thread_count();

/// Evaluate job(i) for i in [0, n) on up to `threads` workers and return the
/// results in index order. Jobs must be independent. The first exception by
/// job index is rethrown after all workers finish.
template <class Result>
std::vector<Result> parallel_map(std::size_t n, unsigned threads,
                                 const std::function<Result(std::size_t)>& job) {
    std::vector<std::optional<Result>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                slots[i].emplace(job(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    }

    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<Result> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace harper
