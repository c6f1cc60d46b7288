#include <mvdict/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mvdict {

namespace {

std::atomic<int> g_max_threads{0};  // 0 = not set yet, use hardware count
thread_local bool t_inside_parallel = false;

int hardware_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace

void set_max_threads(int threads) { g_max_threads.store(threads < 1 ? 1 : threads); }

int max_threads() {
    const int t = g_max_threads.load();
    return t == 0 ? hardware_threads() : t;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int cap = max_threads();
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(cap), n);
    if (workers <= 1 || t_inside_parallel) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            t_inside_parallel = true;
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace mvdict
