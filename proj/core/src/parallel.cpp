#include "entpack/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace entpack {

int default_worker_count() {
    if (const char* env = std::getenv("ENTPACK_WORKERS")) {
        try {
            const int value = std::stoi(env);
            if (value > 0) return value;
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

int resolve_workers(int requested) { return requested > 0 ? requested : default_worker_count(); }

void parallel_chunks(std::size_t n, std::size_t chunks, int workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (n == 0 || chunks == 0) return;
    const auto bounds = [&](std::size_t c) { return c * n / chunks; };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), chunks);
    if (threads <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(bounds(c), bounds(c + 1), c);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
            try {
                body(bounds(c), bounds(c + 1), c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace entpack
