#ifndef SGC_BP_HPP
#define SGC_BP_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sgc/gf2.hpp"
#include "sgc/llr.hpp"
#include "sgc/rng.hpp"
#include "sgc/tanner.hpp"

namespace sgc {

// Messages over directed edges, indexed by edge id: h runs variable->check,
// u runs check->variable. u starts at zero (the standard initialization).
struct LlrMessageSet {
    std::vector<double> h;
    std::vector<double> u;

    explicit LlrMessageSet(std::size_t num_edges)
        : h(num_edges, 0.0), u(num_edges, 0.0) {}
};

struct DecodeResult {
    std::vector<std::uint8_t> estimate;
    std::size_t iterations_used = 0;
    bool converged = false;                 // estimate is a codeword
    std::size_t tie_breaks = 0;             // fair-coin decisions consumed
    std::vector<double> soft;               // final per-bit LLR B + sum u
    std::vector<double> bit_error_trace;    // per-iteration, if truth given
    std::vector<std::size_t> unsat_trace;   // bit flipping only

    BitVec estimate_bits() const { return BitVec::from_bits(estimate); }
};

namespace detail {

inline bool syndrome_ok(const TannerGraph& g, const std::vector<std::uint8_t>& x) {
    for (std::size_t a = 0; a < g.num_checks(); ++a) {
        unsigned parity = 0;
        for (std::size_t i : g.chk_neighbors(a)) parity ^= x[i];
        if (parity) return false;
    }
    return true;
}

}  // namespace detail

// Flooding-schedule sum-product decoding in half-LLR form:
//   h_{i->a} = B_i + sum_{b != a} u_{b->i}
//   u_{a->i} = atanh prod_{j != i} tanh h_{j->a}
// Hard decisions by the sign of B_i + sum_b u_{b->i}; exact zeros are broken
// by a fair coin from the caller's generator. Exits early once the decision
// is a codeword.
inline DecodeResult bp_decode(const TannerGraph& g, std::span<const double> channel_llrs,
                              std::size_t max_iter, Rng& rng,
                              const std::vector<std::uint8_t>* truth = nullptr,
                              double cap = kLlrCap, bool early_exit = true,
                              LlrMessageSet* msgs_out = nullptr) {
    const std::size_t n = g.num_vars();
    if (channel_llrs.size() != n) throw std::invalid_argument("LLR length mismatch");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    LlrMessageSet msgs(g.num_edges());
    DecodeResult res;
    res.estimate.assign(n, 0);
    res.soft.assign(n, 0.0);

    std::vector<double> in, out;  // scratch for per-node gathers
    auto decide = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            in.clear();
            in.push_back(channel_llrs[i]);
            for (std::size_t e : g.var_edge_ids(i)) in.push_back(msgs.u[e]);
            const double total = llr_sum(in);
            res.soft[i] = total;
            if (total > 0)
                res.estimate[i] = 0;
            else if (total < 0)
                res.estimate[i] = 1;
            else {
                res.estimate[i] = bernoulli(rng, 0.5) ? 1 : 0;
                ++res.tie_breaks;
            }
        }
        if (truth) {
            double errs = 0;
            for (std::size_t i = 0; i < n; ++i) errs += res.estimate[i] != (*truth)[i];
            res.bit_error_trace.push_back(errs / static_cast<double>(n));
        }
        return detail::syndrome_ok(g, res.estimate);
    };

    if (decide() && early_exit) {
        res.iterations_used = 0;
        res.converged = true;
        if (msgs_out) *msgs_out = msgs;
        return res;
    }

    for (std::size_t t = 0; t < max_iter; ++t) {
        // variable-to-check pass
        for (std::size_t i = 0; i < n; ++i) {
            const auto& eids = g.var_edge_ids(i);
            for (std::size_t e : eids) {
                in.clear();
                in.push_back(channel_llrs[i]);
                for (std::size_t e2 : eids)
                    if (e2 != e) in.push_back(msgs.u[e2]);
                double h = llr_sum(in);
                msgs.h[e] = std::isinf(h) ? h : clamp_llr(h, cap);
            }
        }
        // check-to-variable pass
        for (std::size_t a = 0; a < g.num_checks(); ++a) {
            const auto& eids = g.chk_edge_ids(a);
            in.clear();
            for (std::size_t e : eids) in.push_back(msgs.h[e]);
            out.resize(eids.size());
            check_node_pass(in, out, cap);
            for (std::size_t j = 0; j < eids.size(); ++j) msgs.u[eids[j]] = out[j];
        }
        res.iterations_used = t + 1;
        if (decide() && early_exit) {
            res.converged = true;
            if (msgs_out) *msgs_out = msgs;
            return res;
        }
    }
    res.converged = detail::syndrome_ok(g, res.estimate);
    if (msgs_out) *msgs_out = msgs;
    return res;
}

}  // namespace sgc

#endif
