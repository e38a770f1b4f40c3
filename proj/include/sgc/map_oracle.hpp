#ifndef SGC_MAP_ORACLE_HPP
#define SGC_MAP_ORACLE_HPP

#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgc/bitvec.hpp"
#include "sgc/channel.hpp"
#include "sgc/gf2.hpp"
#include "sgc/llr.hpp"

namespace sgc {

struct MapResult {
    BitVec word_map;                 // a most likely codeword
    std::size_t word_map_ties = 0;   // codewords sharing the optimum
    std::vector<double> marginals0;  // P(x_i = 0 | y), exact
    std::vector<std::uint8_t> symbol_map;
    std::size_t symbol_ties = 0;     // bits with an exactly uniform marginal
};

// Exhaustive word-MAP / symbol-MAP over the code defined by H. Enumerates
// the null space through a Gray code, so each step touches only the support
// of one basis vector. Requires dim = N - rank(H) <= 24.
inline MapResult map_decode_bruteforce(const ParityCheckMatrix& h,
                                       const ChannelModel& channel,
                                       const std::vector<OutputSymbol>& y) {
    const std::size_t n = h.cols();
    if (y.size() != n) throw std::invalid_argument("output length mismatch");
    const auto basis = h.codeword_basis();
    const std::size_t dim = basis.size();
    if (dim > 24) throw std::invalid_argument("code too large for enumeration");

    // Per-bit log Q(y_i|x_i); -inf entries are tracked by count so that a
    // zero-probability word never contaminates the finite sum.
    std::vector<double> logq0(n), logq1(n);
    for (std::size_t i = 0; i < n; ++i) {
        logq0[i] = std::log(channel.transition_prob(0, y[i]));
        logq1[i] = std::log(channel.transition_prob(1, y[i]));
    }

    struct Weight {
        double finite = 0.0;
        std::size_t zeros = 0;  // count of -inf factors
        void add(double lq, int dir) {
            if (lq == -kInf)
                zeros += dir;
            else
                finite += dir * lq;
        }
        bool positive() const { return zeros == 0; }
    };

    BitVec x(n);
    Weight w;
    for (std::size_t i = 0; i < n; ++i) w.add(logq0[i], +1);

    auto flip_bit = [&](std::size_t i) {
        if (x.get(i)) {
            w.add(logq1[i], -1);
            w.add(logq0[i], +1);
        } else {
            w.add(logq0[i], -1);
            w.add(logq1[i], +1);
        }
        x.flip(i);
    };

    const std::size_t count = std::size_t{1} << dim;

    // Pass 1: best log weight and the word-MAP representative.
    double best = -kInf;
    std::size_t best_ties = 0;
    BitVec best_word = x;
    std::size_t prev_gray = 0;
    for (std::size_t c = 0;; ++c) {
        const double lw = w.positive() ? w.finite : -kInf;
        if (lw > best + 1e-12) {
            best = lw;
            best_ties = 1;
            best_word = x;
        } else if (lw != -kInf && std::fabs(lw - best) <= 1e-12) {
            ++best_ties;
        }
        if (c + 1 == count) break;
        const std::size_t gray = (c + 1) ^ ((c + 1) >> 1);
        const std::size_t b = std::countr_zero(gray ^ prev_gray);
        prev_gray = gray;
        for (std::size_t i = 0; i < n; ++i)
            if (basis[b].get(i)) flip_bit(i);
    }
    if (best == -kInf)
        throw std::runtime_error("all codewords have zero likelihood under y");

    // Pass 2: exact marginals, scaled by the best weight.
    std::vector<double> sum0(n, 0.0);
    double total = 0.0;
    // Reset enumeration state.
    while (x.any()) {
        for (std::size_t i = 0; i < n; ++i)
            if (x.get(i)) flip_bit(i);
    }
    prev_gray = 0;
    for (std::size_t c = 0;; ++c) {
        if (w.positive()) {
            const double p = std::exp(w.finite - best);
            total += p;
            for (std::size_t i = 0; i < n; ++i)
                if (!x.get(i)) sum0[i] += p;
        }
        if (c + 1 == count) break;
        const std::size_t gray = (c + 1) ^ ((c + 1) >> 1);
        const std::size_t b = std::countr_zero(gray ^ prev_gray);
        prev_gray = gray;
        for (std::size_t i = 0; i < n; ++i)
            if (basis[b].get(i)) flip_bit(i);
    }

    MapResult res;
    res.word_map = best_word;
    res.word_map_ties = best_ties;
    res.marginals0.resize(n);
    res.symbol_map.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double m0 = sum0[i] / total;
        res.marginals0[i] = m0;
        if (std::fabs(m0 - 0.5) <= 1e-12) {
            res.symbol_map[i] = 0;
            ++res.symbol_ties;
        } else {
            res.symbol_map[i] = m0 > 0.5 ? 0 : 1;
        }
    }
    return res;
}

}  // namespace sgc

#endif
