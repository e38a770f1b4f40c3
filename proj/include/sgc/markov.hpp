#ifndef SGC_MARKOV_HPP
#define SGC_MARKOV_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sgc/bp.hpp"
#include "sgc/llr.hpp"
#include "sgc/rng.hpp"
#include "sgc/tanner.hpp"

namespace sgc {

// Finite-state Markov-modulated BSC. P is column-stochastic: P[next][present].
// The kernel convention is p(x_t, y_t, s_t | s_{t-1}) = (1/2) P[s_t][s_{t-1}]
// BSC_{eps[s_t]}(y_t | x_t): the output is corrupted with the crossover of
// the state just entered.
struct MarkovChannelSpec {
    std::vector<std::vector<double>> P;  // P[i][j] = P(next = i | present = j)
    std::vector<double> eps;             // per-state crossover, in [0, 1/2]
    std::optional<std::vector<double>> initial;  // default: steady state
    bool ergodic = false;                // recorded at construction

    std::size_t num_states() const { return eps.size(); }

    MarkovChannelSpec(std::vector<std::vector<double>> transition,
                      std::vector<double> crossover,
                      std::optional<std::vector<double>> init = std::nullopt)
        : P(std::move(transition)), eps(std::move(crossover)), initial(std::move(init)) {
        const std::size_t s = eps.size();
        if (s == 0 || P.size() != s) throw std::invalid_argument("bad state count");
        for (std::size_t i = 0; i < s; ++i)
            if (P[i].size() != s) throw std::invalid_argument("P is not square");
        for (std::size_t j = 0; j < s; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                if (P[i][j] < 0.0) throw std::invalid_argument("negative transition");
                col += P[i][j];
            }
            if (std::fabs(col - 1.0) > 1e-9)
                throw std::invalid_argument("column of P does not sum to 1");
        }
        for (double e : eps)
            if (e < 0.0 || e > 0.5)
                throw std::invalid_argument("crossover outside [0, 1/2]");
        if (initial && initial->size() != s)
            throw std::invalid_argument("initial distribution size mismatch");
        ergodic = irreducible() && has_self_loop();
    }

    double bsc(std::size_t state, int y, int x) const {
        return y == x ? 1.0 - eps[state] : eps[state];
    }

  private:
    bool irreducible() const {
        const std::size_t s = num_states();
        // reachability closure of (I + P) over the boolean semiring
        std::vector<std::vector<char>> reach(s, std::vector<char>(s, 0));
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                reach[i][j] = i == j || P[i][j] > 0.0;
        for (std::size_t m = 0; m < s; ++m)
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = 0; j < s; ++j)
                    for (std::size_t q = 0; q < s; ++q)
                        reach[i][j] |= reach[i][q] && reach[q][j];
        for (auto& row : reach)
            for (char c : row)
                if (!c) return false;
        return true;
    }
    // a positive diagonal entry plus irreducibility gives aperiodicity
    bool has_self_loop() const {
        for (std::size_t i = 0; i < num_states(); ++i)
            if (P[i][i] > 0.0) return true;
        return false;
    }
};

// Steady state via p = e (I - P^T + E)^{-1}, i.e. the linear system
// (I - P + E) p^T = e^T, with a power-iteration fallback if that system is
// singular. The returned vector satisfies ||P p - p||_inf <= 1e-10.
inline std::vector<double> steady_state(const MarkovChannelSpec& spec) {
    const std::size_t s = spec.num_states();
    std::vector<std::vector<double>> A(s, std::vector<double>(s));
    std::vector<double> rhs(s, 1.0);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            A[i][j] = (i == j ? 1.0 : 0.0) - spec.P[i][j] + 1.0;

    std::vector<double> p(s, 0.0);
    bool solved = true;
    {  // Gaussian elimination with partial pivoting
        auto M = A;
        auto b = rhs;
        for (std::size_t c = 0; c < s && solved; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < s; ++r)
                if (std::fabs(M[r][c]) > std::fabs(M[piv][c])) piv = r;
            if (std::fabs(M[piv][c]) < 1e-12) {
                solved = false;
                break;
            }
            std::swap(M[piv], M[c]);
            std::swap(b[piv], b[c]);
            for (std::size_t r = 0; r < s; ++r) {
                if (r == c) continue;
                const double f = M[r][c] / M[c][c];
                for (std::size_t q = c; q < s; ++q) M[r][q] -= f * M[c][q];
                b[r] -= f * b[c];
            }
        }
        if (solved)
            for (std::size_t i = 0; i < s; ++i) p[i] = b[i] / M[i][i];
    }
    if (!solved) {
        p.assign(s, 1.0 / static_cast<double>(s));
        for (int it = 0; it < 100000; ++it) {
            std::vector<double> q(s, 0.0);
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = 0; j < s; ++j) q[i] += spec.P[i][j] * p[j];
            double delta = 0.0, norm = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                delta = std::max(delta, std::fabs(q[i] - p[i]));
                norm += q[i];
            }
            for (auto& v : q) v /= norm;
            p = std::move(q);
            if (delta < 1e-14) break;
        }
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        double pi = 0.0;
        for (std::size_t j = 0; j < s; ++j) pi += spec.P[i][j] * p[j];
        residual = std::max(residual, std::fabs(pi - p[i]));
    }
    if (residual > 1e-10)
        throw std::runtime_error("steady state residual " + std::to_string(residual));
    return p;
}

struct GecSequence {
    std::vector<std::size_t> states;   // sigma_0 .. sigma_N
    std::vector<std::uint8_t> inputs;  // x_1 .. x_N, uniform
    std::vector<std::uint8_t> outputs; // y_1 .. y_N
};

inline GecSequence sample_sequence(const MarkovChannelSpec& spec, std::size_t n,
                                   Rng& rng) {
    const std::size_t s = spec.num_states();
    const std::vector<double> init =
        spec.initial ? *spec.initial : steady_state(spec);
    auto draw_state = [&](const std::vector<double>& dist) {
        double u = uniform01(rng), cum = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            cum += dist[i];
            if (u < cum) return i;
        }
        return s - 1;
    };
    GecSequence seq;
    seq.states.resize(n + 1);
    seq.inputs.resize(n);
    seq.outputs.resize(n);
    seq.states[0] = draw_state(init);
    std::vector<double> col(s);
    for (std::size_t t = 1; t <= n; ++t) {
        for (std::size_t i = 0; i < s; ++i) col[i] = spec.P[i][seq.states[t - 1]];
        seq.states[t] = draw_state(col);
        seq.inputs[t - 1] = bernoulli(rng, 0.5);
        seq.outputs[t - 1] =
            seq.inputs[t - 1] ^ (bernoulli(rng, spec.eps[seq.states[t]]) ? 1 : 0);
    }
    return seq;
}

// Normalized forward message over states plus the accumulated log
// normalizers; exposes -(1/N) log p(y) style entropy-rate estimates.
struct ForwardState {
    std::vector<double> message;   // sums to one
    double log2_normalizer = 0.0;  // sum of log2 lambda_t
};

// One forward step. If input_clamp is negative the input is marginalized
// with its uniform prior, otherwise it is fixed to the given bit.
inline void forward_step(const MarkovChannelSpec& spec, ForwardState& fs, int y,
                         int input_clamp) {
    const std::size_t s = spec.num_states();
    std::vector<double> next(s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
        double emit;
        if (input_clamp < 0)
            emit = 0.5 * (spec.bsc(i, y, 0) + spec.bsc(i, y, 1));
        else
            emit = 0.5 * spec.bsc(i, y, input_clamp);
        double acc = 0.0;
        for (std::size_t j = 0; j < s; ++j) acc += spec.P[i][j] * fs.message[j];
        next[i] = emit * acc;
    }
    double lambda = 0.0;
    for (double v : next) lambda += v;
    if (lambda <= 0.0) throw std::runtime_error("forward recursion hit probability 0");
    for (auto& v : next) v /= lambda;
    fs.message = std::move(next);
    fs.log2_normalizer += std::log2(lambda);
}

struct EntropyRates {
    double hy = 0.0;     // H(Y)/N in bits
    double hxy = 0.0;    // H(Y,X)/N in bits
    double info = 0.0;   // I = H(Y)/N - (H(Y,X)/N - 1)
};

// Single long-path estimates of the output and joint entropy rates by the
// normalized forward recursion; ergodicity does the averaging.
inline EntropyRates entropy_rates(const MarkovChannelSpec& spec, std::size_t n,
                                  std::uint64_t seed) {
    Rng rng = make_rng(seed, 401);
    const GecSequence seq = sample_sequence(spec, n, rng);
    const std::vector<double> init =
        spec.initial ? *spec.initial : steady_state(spec);

    ForwardState fy{init, 0.0}, fxy{init, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
        forward_step(spec, fy, seq.outputs[t], -1);
        forward_step(spec, fxy, seq.outputs[t], seq.inputs[t]);
    }
    EntropyRates rates;
    rates.hy = -fy.log2_normalizer / static_cast<double>(n);
    rates.hxy = -fxy.log2_normalizer / static_cast<double>(n);
    rates.info = rates.hy - (rates.hxy - 1.0);
    return rates;
}

struct GecDecodeResult {
    DecodeResult decode;
    std::vector<double> chain_llr;        // final per-bit half-LLRs from the chain
    std::vector<std::vector<double>> state_posterior;  // gamma_t over states
};

// Sum-product on the chain+code graph: each round alternates one
// forward-backward channel-estimation sweep with one BP iteration on the
// code. code_prior holds the code-side beliefs per bit (half-LLR).
inline std::vector<double> gec_channel_llrs(const MarkovChannelSpec& spec,
                                            const std::vector<std::uint8_t>& y,
                                            const std::vector<double>& code_prior,
                                            std::vector<std::vector<double>>* posterior,
                                            std::optional<std::size_t> window) {
    const std::size_t n = y.size();
    const std::size_t s = spec.num_states();
    const std::vector<double> init =
        spec.initial ? *spec.initial : steady_state(spec);

    auto prior0 = [&](std::size_t t) { return prob0_of_llr(code_prior[t]); };

    // alpha_t for t = 0..n (alpha[0] = initial), beta_t for t = 0..n
    std::vector<std::vector<double>> alpha(n + 1, std::vector<double>(s));
    std::vector<std::vector<double>> beta(n + 1, std::vector<double>(s, 1.0));
    const std::size_t radius = window.value_or(n);

    alpha[0] = init;
    for (std::size_t t = 1; t <= n; ++t) {
        const double q0 = prior0(t - 1);
        double norm = 0.0;
        for (std::size_t i = 0; i < s; ++i) {
            const double emit = q0 * spec.bsc(i, y[t - 1], 0) +
                                (1.0 - q0) * spec.bsc(i, y[t - 1], 1);
            double acc = 0.0;
            for (std::size_t j = 0; j < s; ++j) acc += spec.P[i][j] * alpha[t - 1][j];
            alpha[t][i] = emit * acc;
            norm += alpha[t][i];
        }
        for (auto& v : alpha[t]) v /= norm;
    }
    for (std::size_t t = n; t-- > 0;) {
        const double q0 = prior0(t);
        double norm = 0.0;
        for (std::size_t j = 0; j < s; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                const double emit = q0 * spec.bsc(i, y[t], 0) +
                                    (1.0 - q0) * spec.bsc(i, y[t], 1);
                acc += spec.P[i][j] * emit * beta[t + 1][i];
            }
            beta[t][j] = acc;
            norm += acc;
        }
        for (auto& v : beta[t]) v /= norm;
    }

    std::vector<double> llrs(n);
    for (std::size_t t = 0; t < n; ++t) {
        double m0 = 0.0, m1 = 0.0;
        if (radius >= n) {
            for (std::size_t i = 0; i < s; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < s; ++j)
                    acc += spec.P[i][j] * alpha[t][j];
                m0 += spec.bsc(i, y[t], 0) * acc * beta[t + 1][i];
                m1 += spec.bsc(i, y[t], 1) * acc * beta[t + 1][i];
            }
        } else {
            // windowed estimate: rebuild local forward/backward passes over
            // [t-R, t+R] from flat endpoints
            const std::size_t lo = t >= radius ? t - radius : 0;
            const std::size_t hi = std::min(n - 1, t + radius);
            std::vector<double> a(init);
            if (lo > 0) a.assign(s, 1.0 / static_cast<double>(s));
            for (std::size_t q = lo; q < t; ++q) {
                const double q0 = prior0(q);
                std::vector<double> nx(s, 0.0);
                double norm = 0.0;
                for (std::size_t i = 0; i < s; ++i) {
                    const double emit =
                        q0 * spec.bsc(i, y[q], 0) + (1.0 - q0) * spec.bsc(i, y[q], 1);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < s; ++j) acc += spec.P[i][j] * a[j];
                    nx[i] = emit * acc;
                    norm += nx[i];
                }
                for (auto& v : nx) v /= norm;
                a = std::move(nx);
            }
            std::vector<double> bt(s, 1.0);
            for (std::size_t q = hi; q > t; --q) {
                const double q0 = prior0(q);
                std::vector<double> nx(s, 0.0);
                double norm = 0.0;
                for (std::size_t j = 0; j < s; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < s; ++i) {
                        const double emit = q0 * spec.bsc(i, y[q], 0) +
                                            (1.0 - q0) * spec.bsc(i, y[q], 1);
                        acc += spec.P[i][j] * emit * bt[i];
                    }
                    nx[j] = acc;
                    norm += nx[j];
                }
                for (auto& v : nx) v /= norm;
                bt = std::move(nx);
            }
            for (std::size_t i = 0; i < s; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < s; ++j) acc += spec.P[i][j] * a[j];
                m0 += spec.bsc(i, y[t], 0) * acc * bt[i];
                m1 += spec.bsc(i, y[t], 1) * acc * bt[i];
            }
        }
        if (m0 <= 0.0 && m1 <= 0.0) throw std::runtime_error("state estimation degenerated");
        llrs[t] = m1 <= 0.0 ? kInf : (m0 <= 0.0 ? -kInf : 0.5 * std::log(m0 / m1));
    }
    if (posterior) {
        posterior->assign(n + 1, std::vector<double>(s));
        for (std::size_t t = 0; t <= n; ++t) {
            double norm = 0.0;
            for (std::size_t i = 0; i < s; ++i) {
                (*posterior)[t][i] = alpha[t][i] * beta[t][i];
                norm += (*posterior)[t][i];
            }
            for (auto& v : (*posterior)[t]) v /= norm;
        }
    }
    return llrs;
}

inline GecDecodeResult joint_decode_gec(const TannerGraph& g,
                                        const MarkovChannelSpec& spec,
                                        const std::vector<std::uint8_t>& y,
                                        std::size_t rounds, Rng& rng,
                                        std::optional<std::size_t> window = std::nullopt) {
    const std::size_t n = g.num_vars();
    if (y.size() != n) throw std::invalid_argument("output length mismatch");

    GecDecodeResult out;
    out.decode.estimate.assign(n, 0);
    out.decode.soft.assign(n, 0.0);

    LlrMessageSet msgs(g.num_edges());
    std::vector<double> code_prior(n, 0.0);  // sum of u into each bit
    std::vector<double> in, uout;

    auto decide = [&](const std::vector<double>& chain_llr) {
        for (std::size_t i = 0; i < n; ++i) {
            in.clear();
            in.push_back(chain_llr[i]);
            for (std::size_t e : g.var_edge_ids(i)) in.push_back(msgs.u[e]);
            const double total = llr_sum(in);
            out.decode.soft[i] = total;
            if (total > 0)
                out.decode.estimate[i] = 0;
            else if (total < 0)
                out.decode.estimate[i] = 1;
            else {
                out.decode.estimate[i] = bernoulli(rng, 0.5) ? 1 : 0;
                ++out.decode.tie_breaks;
            }
        }
        return detail::syndrome_ok(g, out.decode.estimate);
    };

    out.chain_llr = gec_channel_llrs(spec, y, code_prior, &out.state_posterior, window);
    if (decide(out.chain_llr)) {
        out.decode.iterations_used = 0;
        out.decode.converged = true;
        return out;
    }

    for (std::size_t r = 1; r <= rounds; ++r) {
        // one flooding BP iteration on the code graph
        for (std::size_t i = 0; i < n; ++i) {
            const auto& eids = g.var_edge_ids(i);
            for (std::size_t e : eids) {
                in.clear();
                in.push_back(out.chain_llr[i]);
                for (std::size_t e2 : eids)
                    if (e2 != e) in.push_back(msgs.u[e2]);
                const double h = llr_sum(in);
                msgs.h[e] = std::isinf(h) ? h : clamp_llr(h);
            }
        }
        for (std::size_t a = 0; a < g.num_checks(); ++a) {
            const auto& eids = g.chk_edge_ids(a);
            in.clear();
            for (std::size_t e : eids) in.push_back(msgs.h[e]);
            uout.resize(eids.size());
            check_node_pass(in, uout);
            for (std::size_t j = 0; j < eids.size(); ++j) msgs.u[eids[j]] = uout[j];
        }
        // refresh the code-side beliefs and re-estimate the channel
        for (std::size_t i = 0; i < n; ++i) {
            in.clear();
            for (std::size_t e : g.var_edge_ids(i)) in.push_back(msgs.u[e]);
            code_prior[i] = llr_sum(in);
        }
        out.chain_llr = gec_channel_llrs(spec, y, code_prior, &out.state_posterior, window);
        out.decode.iterations_used = r;
        if (decide(out.chain_llr)) {
            out.decode.converged = true;
            return out;
        }
    }
    out.decode.converged = detail::syndrome_ok(g, out.decode.estimate);
    return out;
}

}  // namespace sgc

#endif
