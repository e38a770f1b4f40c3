#ifndef SGC_PAR_HPP
#define SGC_PAR_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace sgc {

inline bool run_serial() {
    static const bool serial = std::getenv("SGC_SERIAL") != nullptr;
    return serial;
}

// Runs f(block_index, begin, end) over a fixed block partition of [0, n).
// The partition depends only on n and nblocks, never on the worker count,
// so results are reproducible for any hardware_concurrency. SGC_SERIAL in
// the environment forces single-threaded execution.
template <class F>
void par_for_blocks(std::size_t n, std::size_t nblocks, F&& f) {
    if (n == 0) return;
    if (nblocks == 0) nblocks = 1;
    if (nblocks > n) nblocks = n;
    const std::size_t chunk = (n + nblocks - 1) / nblocks;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || nblocks == 1 || run_serial()) {
        for (std::size_t b = 0; b * chunk < n; ++b)
            f(b, b * chunk, std::min(n, (b + 1) * chunk));
        return;
    }
    std::vector<std::future<void>> futs;
    futs.reserve(hw);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < hw; ++t) {
        futs.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                std::size_t lo = b * chunk;
                if (lo >= n) return;
                f(b, lo, std::min(n, lo + chunk));
            }
        }));
    }
    for (auto& fu : futs) fu.get();
}

}  // namespace sgc

#endif
