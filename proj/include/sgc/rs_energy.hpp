#ifndef SGC_RS_ENERGY_HPP
#define SGC_RS_ENERGY_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sgc/channel.hpp"
#include "sgc/density_evolution.hpp"
#include "sgc/llr.hpp"
#include "sgc/par.hpp"
#include "sgc/rng.hpp"

namespace sgc {

// An approximate density-evolution fixed point. The u side is regenerated
// from pop_h through the check rule immediately before any functional
// evaluation, so the check-side distributional identity holds exactly in
// the sampling procedure.
struct FixedPointPair {
    Population pop_u;
    Population pop_h;
    double residual = 0.0;  // CDF distance between the last two h generations
};

struct RsValue {
    double value = 0.0;      // phi_{u,h} in bits
    double std_error = 0.0;  // Monte Carlo standard error of the mean
    std::size_t samples = 0;
};

// Sup-distance between empirical CDFs on a 512-bin grid over
// [-kLlrCap, kLlrCap] plus the two infinite atoms.
inline double population_cdf_distance(const Population& a, const Population& b) {
    constexpr std::size_t kBins = 512;
    auto histogram = [](const Population& p) {
        std::vector<double> h(kBins + 2, 0.0);
        const double scale = kBins / (2.0 * kLlrCap);
        for (double v : p.samples) {
            std::size_t idx;
            if (v == -kInf)
                idx = 0;
            else if (v == kInf)
                idx = kBins + 1;
            else
                idx = 1 + std::min<std::size_t>(
                              kBins - 1,
                              static_cast<std::size_t>((v + kLlrCap) * scale));
            h[idx] += 1.0 / static_cast<double>(p.samples.size());
        }
        return h;
    };
    const auto ha = histogram(a), hb = histogram(b);
    double cum = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) {
        cum += ha[i] - hb[i];
        worst = std::max(worst, std::fabs(cum));
    }
    return worst;
}

// Fresh u population drawn from pop_h via the check-node rule.
inline Population regenerate_u(const Population& pop_h, std::size_t chk_degree,
                               const DeSettings& cfg, std::uint64_t tag = 7) {
    const std::size_t n = pop_h.samples.size();
    Population pop_u;
    pop_u.samples.resize(n);
    pop_u.generation = pop_h.generation;
    par_for_blocks(n, cfg.blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = make_rng(cfg.seed, pop_h.generation, b, tag);
        double in[64];
        for (std::size_t s = lo; s < hi; ++s) {
            for (std::size_t j = 0; j + 1 < chk_degree; ++j)
                in[j] = pop_h.samples[uniform_index(rng, n)];
            pop_u.samples[s] = check_combine({in, chk_degree - 1});
        }
    });
    return pop_u;
}

namespace detail {

inline double logaddexp_nats(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// ln P_u(0) and ln P_u(1) for a half-LLR u.
inline void log_bit_probs(double u, double& lp0, double& lp1) {
    if (u == kInf) {
        lp0 = 0.0;
        lp1 = -kInf;
        return;
    }
    if (u == -kInf) {
        lp0 = -kInf;
        lp1 = 0.0;
        return;
    }
    if (u >= 0) {
        const double e = std::exp(-2.0 * u);
        lp0 = -std::log1p(e);
        lp1 = -2.0 * u + lp0;
    } else {
        const double e = std::exp(2.0 * u);
        lp1 = -std::log1p(e);
        lp0 = 2.0 * u + lp1;
    }
}

}  // namespace detail

// Monte Carlo evaluation of the replica-symmetric functional (in bits):
//   -l E log2[ sum_x P_u(x) P_h(x) ]
//   + E_y E log2[ sum_x Q(y|x)/Q(y|0) prod_{i<=l} P_{u_i}(x) ]
//   + (l/k) E log2[ sum_{x_1..x_k} I[parity even] prod_i P_{h_i}(x_i) ]
// with P_u(0) = 1/(1+e^{-2u}), y ~ Q(.|0). The parity sum collapses to
// (1/2)(1 + prod_i tanh h_i), evaluated in sign/log-magnitude form.
inline RsValue phi_functional(const FixedPointPair& pair, std::size_t var_degree,
                              std::size_t chk_degree, const ChannelModel& channel,
                              std::size_t samples, std::uint64_t seed) {
    const std::size_t nu = pair.pop_u.samples.size();
    const std::size_t nh = pair.pop_h.samples.size();
    const double l = static_cast<double>(var_degree);
    const double lk = l / static_cast<double>(chk_degree);
    const ChannelLlrSampler draw_b(channel);

    const std::size_t nblocks = 64;
    std::vector<double> sums(nblocks + 1, 0.0), sq(nblocks + 1, 0.0);
    par_for_blocks(samples, nblocks, [&](std::size_t blk, std::size_t lo, std::size_t hi) {
        Rng rng = make_rng(seed, blk, std::uint64_t{11});
        double acc = 0.0, acc2 = 0.0;
        for (std::size_t s = lo; s < hi; ++s) {
            // edge term: one u against one h
            const double u = pair.pop_u.samples[uniform_index(rng, nu)];
            const double h = pair.pop_h.samples[uniform_index(rng, nh)];
            const double pu0 = prob0_of_llr(u), ph0 = prob0_of_llr(h);
            const double t1 = std::log2(pu0 * ph0 + (1.0 - pu0) * (1.0 - ph0));

            // variable term: channel draw against l u-messages
            const double b = draw_b(rng);
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t j = 0; j < var_degree; ++j) {
                double lp0, lp1;
                detail::log_bit_probs(pair.pop_u.samples[uniform_index(rng, nu)],
                                      lp0, lp1);
                s0 += lp0;
                s1 += lp1;
            }
            // ln Q(y|1)/Q(y|0) = -2B
            const double t2 =
                detail::logaddexp_nats(s0, s1 - 2.0 * b) / kLn2;

            // check term: k h-messages through the even-parity identity
            double logmag = 0.0;
            int sign = 1;
            for (std::size_t j = 0; j < chk_degree; ++j) {
                const double hj = pair.pop_h.samples[uniform_index(rng, nh)];
                if (hj == 0.0) {
                    logmag = -kInf;
                    continue;
                }
                if (hj < 0) sign = -sign;
                if (!std::isinf(hj)) logmag += log_tanh(std::fabs(hj));
            }
            double t3;
            if (logmag == -kInf) {
                t3 = -1.0;  // product 0: log2(1/2)
            } else if (sign > 0) {
                t3 = (std::log1p(std::exp(logmag)) - kLn2) / kLn2;
            } else {
                assert(logmag < 0.0 && "contradictory certain messages at a check");
                t3 = (std::log(-std::expm1(logmag)) - kLn2) / kLn2;
            }

            const double phi = -l * t1 + t2 + lk * t3;
            acc += phi;
            acc2 += phi * phi;
        }
        sums[blk] = acc;
        sq[blk] = acc2;
    });

    double total = 0.0, total2 = 0.0;
    for (double v : sums) total += v;
    for (double v : sq) total2 += v;
    RsValue out;
    out.samples = samples;
    out.value = total / static_cast<double>(samples);
    const double var =
        std::max(0.0, total2 / static_cast<double>(samples) - out.value * out.value);
    out.std_error = std::sqrt(var / static_cast<double>(samples));
    return out;
}

enum class RsInit { NoError, ZeroLlr };

struct RsSettings {
    DeSettings de;
    std::size_t samples = 2000000;
    double fp_residual_tol = 3e-3;
    std::size_t fp_max_iterations = 400;
    double positive_cut = 1e-3;  // bits; classification level for map_threshold
};

struct RsEstimate {
    RsValue value;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

// Runs density evolution from the given initialization to an approximate
// fixed point (CDF residual below tolerance), regenerates the u side, and
// evaluates the functional there. A run that exhausts the iteration budget
// still reports its value, flagged with the achieved residual.
inline RsEstimate conditional_entropy_rs(std::size_t var_degree, std::size_t chk_degree,
                                         const ChannelModel& channel, RsInit init,
                                         const RsSettings& cfg) {
    const std::size_t n = cfg.de.population_size;
    RsEstimate est;

    FixedPointPair pair;
    if (init == RsInit::NoError) {
        // all-certain populations are an exact fixed point at any noise
        // level, and the functional cancels on them term by term
        pair.pop_h = Population::constant(n, kInf);
        pair.pop_u = Population::constant(n, kInf);
        pair.residual = 0.0;
        est.converged = true;
        est.value = phi_functional(pair, var_degree, chk_degree, channel,
                                   std::min<std::size_t>(cfg.samples, 200000),
                                   derive_seed(cfg.de.seed, 13));
        return est;
    }
    {
        pair.pop_h = Population::constant(n, 0.0);
        for (std::size_t t = 1; t <= cfg.fp_max_iterations; ++t) {
            auto [u, h] = de_step(pair.pop_h, var_degree, chk_degree, channel, cfg.de);
            est.residual = population_cdf_distance(h, pair.pop_h);
            pair.pop_h = std::move(h);
            pair.pop_u = std::move(u);
            est.iterations = t;
            if (est.residual < cfg.fp_residual_tol) {
                est.converged = true;
                break;
            }
        }
        pair.pop_u = regenerate_u(pair.pop_h, chk_degree, cfg.de);
        pair.residual = est.residual;
    }

    est.value = phi_functional(pair, var_degree, chk_degree, channel, cfg.samples,
                               derive_seed(cfg.de.seed, 13));
    return est;
}

// sup over the two initializations; the no-error branch contributes an
// exact zero, so this is max(0, phi at the nontrivial fixed point).
inline RsEstimate rs_entropy_estimate(std::size_t var_degree, std::size_t chk_degree,
                                      const ChannelModel& channel,
                                      const RsSettings& cfg) {
    RsEstimate zero =
        conditional_entropy_rs(var_degree, chk_degree, channel, RsInit::NoError, cfg);
    RsEstimate nontrivial =
        conditional_entropy_rs(var_degree, chk_degree, channel, RsInit::ZeroLlr, cfg);
    return nontrivial.value.value > zero.value.value ? nontrivial : zero;
}

// Bisection on the sign of the entropy estimate: a value above the
// positive cut marks the parameter as beyond the MAP threshold. When the
// BP threshold is supplied the p_d <= p_c ordering is asserted.
inline ThresholdEstimate map_threshold(std::size_t var_degree, std::size_t chk_degree,
                                       ChannelKind kind, double tol,
                                       const RsSettings& cfg, double lo, double hi,
                                       const double* bp_threshold_value = nullptr) {
    auto above = [&](double p) {
        const RsEstimate e = rs_entropy_estimate(var_degree, chk_degree,
                                                 ChannelModel::make(kind, p), cfg);
        return e.value.value > std::max(cfg.positive_cut, 3.0 * e.value.std_error);
    };
    if (above(lo)) throw std::runtime_error("lower endpoint already above p_c");
    if (!above(hi)) throw std::runtime_error("upper endpoint still below p_c");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    ThresholdEstimate est;
    est.lower = lo;
    est.upper = hi;
    est.value = 0.5 * (lo + hi);
    est.resolution = 0.5 * (hi - lo);
    if (bp_threshold_value && *bp_threshold_value > est.value + est.resolution)
        throw std::runtime_error("MAP threshold estimate fell below the BP threshold");
    return est;
}

}  // namespace sgc

#endif
