#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

namespace secidx {

/// Size guards for the exhaustive routines. All searches are NP-hard or
/// exponential; these keep them at desk scale.
struct Caps {
    /// Max input tuples (M, K, K_i, W) enumerated by secrecy and decoding checks.
    std::uint64_t enumeration = std::uint64_t{1} << 26;
    /// Max message tuples p^(sum l_i) enumerated by conventional verification.
    std::uint64_t verification = std::uint64_t{1} << 24;
    /// Max nodes visited by one fitting-matrix or table-code search.
    std::uint64_t search_nodes = std::uint64_t{1} << 26;
    /// Max receivers accepted by min_rank.
    std::size_t min_rank_receivers = 10;
    /// Worker threads; 0 means hardware concurrency.
    unsigned jobs = 0;

    unsigned workers() const {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        return jobs == 0 ? hw : jobs;
    }

    /// Defaults, with SECIDX_CAP (an integer or "2^k") overriding both
    /// enumeration caps when set.
    static Caps from_env();
};

/// Parses "123" or "2^k"; nullopt on anything else.
std::optional<std::uint64_t> parse_cap(std::string_view text);

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown by any call is rethrown on the calling thread.
template <class Fn>
void parallel_for(unsigned workers, std::size_t n, Fn&& fn) {
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace secidx
