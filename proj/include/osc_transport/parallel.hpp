#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace osc_transport {

/// Worker count from OSC_TRANSPORT_JOBS, falling back to 1.
inline unsigned default_jobs() {
    if (const char* env = std::getenv("OSC_TRANSPORT_JOBS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

/// out[i] = fn(i) for i < n on up to `jobs` threads. Results land by index,
/// so output never depends on scheduling. The exception of the lowest failing
/// index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, F&& fn) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t i) {
        try {
            out[i] = fn(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) work(i);
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace osc_transport
