#include "quasimet/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace quasimet {

int worker_count() {
    if (const char* env = std::getenv("QUASIMET_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
            // fall through to the default
        }
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) return;

    const int workers = std::min(worker_count(), count);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace quasimet
