#ifndef SGC_TESTS_SUPPORT_HPP
#define SGC_TESTS_SUPPORT_HPP

// Shared brute-force oracles. Everything here enumerates exhaustively and
// stays independent of the implementation paths it checks.

#include <cmath>
#include <cstdint>
#include <vector>

#include "sgc/bitvec.hpp"
#include "sgc/channel.hpp"
#include "sgc/gf2.hpp"
#include "sgc/llr.hpp"
#include "sgc/tanner.hpp"

namespace oracle {

// Every codeword of H, by direct trial over all 2^N words (N small).
inline std::vector<sgc::BitVec> enumerate_code(const sgc::ParityCheckMatrix& h) {
    std::vector<sgc::BitVec> code;
    const std::size_t n = h.cols();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        sgc::BitVec x(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1u) x.set(i, true);
        if (h.is_codeword(x)) code.push_back(x);
    }
    return code;
}

// Exact conditional entropy per bit, H(X|Y)/N in bits, for a small code on
// a binary-output channel, by summation over every (codeword, output) pair.
inline double conditional_entropy_per_bit(const sgc::ParityCheckMatrix& h,
                                          const sgc::ChannelModel& channel) {
    const auto code = enumerate_code(h);
    const std::size_t n = h.cols();
    const double prior = 1.0 / static_cast<double>(code.size());
    double entropy = 0.0;
    for (std::size_t ymask = 0; ymask < (std::size_t{1} << n); ++ymask) {
        std::vector<double> w(code.size());
        double py = 0.0;
        for (std::size_t c = 0; c < code.size(); ++c) {
            double q = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const int y = (ymask >> i) & 1u;
                q *= channel.transition_prob(code[c].get(i),
                                             sgc::OutputSymbol::bit(y));
            }
            w[c] = prior * q;
            py += w[c];
        }
        if (py <= 0.0) continue;
        for (double v : w)
            if (v > 0.0) entropy -= v * std::log2(v / py);
    }
    return entropy / static_cast<double>(n);
}

// Shortest cycle through an exhaustive walk search: for every edge, the
// shortest alternative path between its endpoints (found by BFS on the
// graph with that edge removed) closes the shortest cycle through it.
inline std::optional<std::size_t> girth_by_edge_removal(const sgc::TannerGraph& g) {
    const std::size_t n = g.num_vars(), m = g.num_checks();
    std::size_t best = SIZE_MAX;
    for (std::size_t drop = 0; drop < g.num_edges(); ++drop) {
        const std::size_t src = g.edge_var(drop);        // variable node
        const std::size_t dst = n + g.edge_chk(drop);    // check node
        std::vector<std::size_t> dist(n + m, SIZE_MAX);
        std::vector<std::size_t> queue{src};
        dist[src] = 0;
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::size_t u = queue[q];
            const bool is_chk = u >= n;
            for (std::size_t e = 0; e < g.num_edges(); ++e) {
                if (e == drop) continue;
                const std::size_t a = g.edge_var(e), b = n + g.edge_chk(e);
                std::size_t v;
                if (!is_chk && a == u)
                    v = b;
                else if (is_chk && b == u)
                    v = a;
                else
                    continue;
                if (dist[v] != SIZE_MAX) continue;
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
        if (dist[dst] != SIZE_MAX) best = std::min(best, dist[dst] + 1);
    }
    if (best == SIZE_MAX) return std::nullopt;
    return best;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double stderr_of_mean(const std::vector<double>& xs) {
    const double m = mean(xs);
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return std::sqrt(v / static_cast<double>(xs.size() * (xs.size() - 1)));
}

}  // namespace oracle

#endif
