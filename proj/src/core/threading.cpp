#include "core/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace latcart {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
    int n = g_max_threads.load();
    if (n == 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
    }
    return n;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& f,
                  std::int64_t min_per_worker) {
    if (n <= 0) return;
    min_per_worker = std::max<std::int64_t>(1, min_per_worker);
    std::int64_t workers = std::min<std::int64_t>(max_threads(), n / min_per_worker);
    if (workers <= 1) {
        f(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    std::int64_t chunk = (n + workers - 1) / workers;
    for (std::int64_t w = 1; w < workers; ++w) {
        std::int64_t b = w * chunk;
        std::int64_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&f, b, e] { f(b, e); });
    }
    f(0, std::min(n, chunk));
    for (auto& t : pool) t.join();
}

} // namespace latcart
