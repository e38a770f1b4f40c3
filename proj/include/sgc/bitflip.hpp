#ifndef SGC_BITFLIP_HPP
#define SGC_BITFLIP_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgc/bp.hpp"
#include "sgc/rng.hpp"
#include "sgc/tanner.hpp"

namespace sgc {

// Number of parity checks the word x violates on g.
inline std::size_t unsat_count(const TannerGraph& g, const std::vector<std::uint8_t>& x) {
    if (x.size() != g.num_vars()) throw std::invalid_argument("length mismatch");
    std::size_t u = 0;
    for (std::size_t a = 0; a < g.num_checks(); ++a) {
        unsigned parity = 0;
        for (std::size_t i : g.chk_neighbors(a)) parity ^= x[i];
        u += parity;
    }
    return u;
}

// Greedy bit flipping on hard channel output: repeatedly flip a bit that
// sits on more unsatisfied than satisfied checks, chosen uniformly among
// all such bits. The unsatisfied-check count drops on every flip, so the
// loop runs at most num_checks() times.
inline DecodeResult bit_flip_decode(const TannerGraph& g,
                                    const std::vector<std::uint8_t>& y,
                                    std::size_t max_iter, Rng& rng) {
    const std::size_t n = g.num_vars();
    if (y.size() != n) throw std::invalid_argument("length mismatch");

    DecodeResult res;
    res.estimate = y;

    std::vector<std::uint8_t> chk_unsat(g.num_checks(), 0);
    std::size_t total_unsat = 0;
    for (std::size_t a = 0; a < g.num_checks(); ++a) {
        unsigned parity = 0;
        for (std::size_t i : g.chk_neighbors(a)) parity ^= res.estimate[i];
        chk_unsat[a] = static_cast<std::uint8_t>(parity);
        total_unsat += parity;
    }

    std::vector<std::size_t> bit_unsat(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a : g.var_neighbors(i)) bit_unsat[i] += chk_unsat[a];

    auto eligible = [&](std::size_t i) {
        return 2 * bit_unsat[i] > g.var_neighbors(i).size();
    };

    std::vector<std::size_t> pool;           // eligible bits (unordered)
    std::vector<std::size_t> pos(n, SIZE_MAX);
    auto pool_add = [&](std::size_t i) {
        if (pos[i] != SIZE_MAX) return;
        pos[i] = pool.size();
        pool.push_back(i);
    };
    auto pool_remove = [&](std::size_t i) {
        if (pos[i] == SIZE_MAX) return;
        const std::size_t last = pool.back();
        pool[pos[i]] = last;
        pos[last] = pos[i];
        pool.pop_back();
        pos[i] = SIZE_MAX;
    };
    for (std::size_t i = 0; i < n; ++i)
        if (eligible(i)) pool_add(i);

    res.unsat_trace.push_back(total_unsat);
    std::size_t flips = 0;
    while (total_unsat > 0 && !pool.empty() && flips < max_iter) {
        const std::size_t i = pool[uniform_index(rng, pool.size())];
        res.estimate[i] ^= 1;
        ++flips;
        for (std::size_t a : g.var_neighbors(i)) {
            const int delta = chk_unsat[a] ? -1 : +1;
            chk_unsat[a] ^= 1;
            total_unsat += delta;
            for (std::size_t j : g.chk_neighbors(a)) {
                bit_unsat[j] += delta;
                if (eligible(j))
                    pool_add(j);
                else
                    pool_remove(j);
            }
        }
        res.unsat_trace.push_back(total_unsat);
    }
    res.iterations_used = flips;
    res.converged = total_unsat == 0;
    return res;
}

}  // namespace sgc

#endif
