#ifndef THETA_PARALLEL_HPP
#define THETA_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace theta {

// Thread budget: hardware concurrency capped by THETA_THREADS.
inline unsigned thread_budget() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("THETA_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    return n;
}

// Static chunking with per-chunk accumulators combined in chunk order, so the
// result does not depend on scheduling.
template <typename Acc, typename ChunkFn, typename CombineFn>
Acc parallel_reduce(std::size_t count, Acc init, ChunkFn chunk_fn, CombineFn combine) {
    const unsigned threads = thread_budget();
    if (threads <= 1 || count < 2 * threads) {
        Acc acc = init;
        chunk_fn(0, count, acc);
        return acc;
    }
    const std::size_t per = (count + threads - 1) / threads;
    std::vector<Acc> accs(threads, init);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * per;
        const std::size_t hi = std::min(count, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&, t, lo, hi] { chunk_fn(lo, hi, accs[t]); });
    }
    for (auto& th : pool) th.join();
    Acc acc = init;
    for (unsigned t = 0; t < threads; ++t) acc = combine(acc, accs[t]);
    return acc;
}

}  // namespace theta

#endif
