#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace visilat {

/// Thrown when a computation would exceed a configured size cap.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(const std::string& what, double estimate, double cap)
        : std::runtime_error(what + ": estimated size " + std::to_string(estimate) + " exceeds cap " +
                             std::to_string(cap)),
          estimate_(estimate), cap_(cap) {}
    double estimate() const { return estimate_; }
    double cap() const { return cap_; }

private:
    double estimate_;
    double cap_;
};

/// Worker count: VISILAT_THREADS when set and positive, else the hardware count.
inline unsigned worker_count() {
    if (const char* env = std::getenv("VISILAT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(worker, begin, end) on contiguous chunks of [0, n). The first
/// exception thrown by any worker is rethrown on the caller's thread.
template <class Body>
void parallel_chunks(std::size_t n, Body&& body, unsigned workers = worker_count()) {
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        body(0u, std::size_t{0}, n);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace visilat
