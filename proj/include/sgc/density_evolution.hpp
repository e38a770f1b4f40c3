#ifndef SGC_DENSITY_EVOLUTION_HPP
#define SGC_DENSITY_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgc/channel.hpp"
#include "sgc/llr.hpp"
#include "sgc/par.hpp"
#include "sgc/rng.hpp"

namespace sgc {

// Fixed-size sample standing in for a message density. Finite entries live
// in [-kLlrCap, kLlrCap]; +/-inf atoms are kept symbolic.
struct Population {
    std::vector<double> samples;
    std::size_t generation = 0;

    static Population constant(std::size_t size, double value) {
        Population p;
        p.samples.assign(size, value);
        return p;
    }
};

// Draws channel log-likelihoods B = (1/2) ln Q(y|0)/Q(y|1) with y ~ Q(.|0),
// with the two-point channels special-cased off the generic path.
class ChannelLlrSampler {
  public:
    explicit ChannelLlrSampler(const ChannelModel& ch) : ch_(ch) {
        if (ch.kind() == ChannelKind::BSC) {
            hit_ = 0.5 * std::log((1.0 - ch.param()) / ch.param());
        }
    }

    double operator()(Rng& rng) const {
        switch (ch_.kind()) {
            case ChannelKind::BSC:
                return bernoulli(rng, ch_.param()) ? -hit_ : hit_;
            case ChannelKind::BEC:
                return bernoulli(rng, ch_.param()) ? 0.0 : kInf;
            default:
                return ch_.llr(ch_.sample_output(0, rng));
        }
    }

  private:
    ChannelModel ch_;
    double hit_ = 0.0;
};

struct DeSettings {
    std::size_t population_size = 100000;
    std::size_t max_iterations = 500;
    double pb_floor = 1e-4;       // "decoded" classification level
    std::uint64_t seed = 1;
    std::size_t blocks = 64;      // parallel block partition (fixed, for determinism)
};

struct DeTrajectory {
    std::size_t var_degree = 0, chk_degree = 0;
    ChannelKind channel_kind = ChannelKind::BSC;
    double channel_param = 0.0;
    std::size_t population_size = 0;
    std::uint64_t seed = 0;
    std::vector<double> pb;       // pb[t]: decision statistic after t check rounds
    std::vector<double> entropy;  // conditional entropy estimate, bits
};

namespace detail {

template <class Body>
void de_parallel(std::size_t n, std::size_t blocks, std::uint64_t seed,
                 std::uint64_t generation, std::uint64_t tag, Body&& body) {
    par_for_blocks(n, blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = make_rng(seed, generation, b, tag);
        for (std::size_t s = lo; s < hi; ++s) body(s, rng);
    });
}

}  // namespace detail

// One distributional update. The check pass resamples k-1 entries of pop_h
// per output; the variable pass adds a fresh channel draw to l-1 entries of
// the new u population.
inline std::pair<Population, Population> de_step(const Population& pop_h,
                                                 std::size_t var_degree,
                                                 std::size_t chk_degree,
                                                 const ChannelModel& channel,
                                                 const DeSettings& cfg) {
    const std::size_t n = pop_h.samples.size();
    if (chk_degree < 2 || chk_degree > 64 || var_degree < 2 || var_degree > 64)
        throw std::invalid_argument("degrees must lie in [2, 64]");
    const std::uint64_t gen = pop_h.generation;
    const ChannelLlrSampler draw_b(channel);

    Population pop_u;
    pop_u.samples.resize(n);
    pop_u.generation = gen + 1;
    detail::de_parallel(n, cfg.blocks, cfg.seed, gen, 0, [&](std::size_t s, Rng& rng) {
        double in[64];
        const std::size_t km1 = chk_degree - 1;
        for (std::size_t j = 0; j < km1; ++j)
            in[j] = pop_h.samples[uniform_index(rng, n)];
        pop_u.samples[s] = check_combine({in, km1});
    });

    Population pop_h_next;
    pop_h_next.samples.resize(n);
    pop_h_next.generation = gen + 1;
    detail::de_parallel(n, cfg.blocks, cfg.seed, gen, 1, [&](std::size_t s, Rng& rng) {
        double in[65];
        const std::size_t lm1 = var_degree - 1;
        in[0] = draw_b(rng);
        for (std::size_t j = 0; j < lm1; ++j)
            in[1 + j] = pop_u.samples[uniform_index(rng, n)];
        const double h = llr_sum({in, lm1 + 1});
        pop_h_next.samples[s] = std::isinf(h) ? h : clamp_llr(h);
    });

    return {std::move(pop_u), std::move(pop_h_next)};
}

// P_b and conditional-entropy estimators from the decision statistic
// B + u_1 + ... + u_l (u drawn with replacement; exact zeros count half).
inline std::pair<double, double> de_error_estimate(const Population& pop_u,
                                                   std::size_t var_degree,
                                                   const ChannelModel& channel,
                                                   const DeSettings& cfg,
                                                   std::uint64_t generation) {
    const std::size_t n = pop_u.samples.size();
    const ChannelLlrSampler draw_b(channel);
    std::vector<double> neg(cfg.blocks + 1, 0.0), ent(cfg.blocks + 1, 0.0);
    par_for_blocks(n, cfg.blocks, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Rng rng = make_rng(cfg.seed, generation, b, std::uint64_t{2});
        double in[66];
        double negb = 0.0, entb = 0.0;
        for (std::size_t s = lo; s < hi; ++s) {
            in[0] = draw_b(rng);
            for (std::size_t j = 0; j < var_degree; ++j)
                in[1 + j] = pop_u.samples[uniform_index(rng, n)];
            const double total = llr_sum({in, var_degree + 1});
            if (total < 0)
                negb += 1.0;
            else if (total == 0)
                negb += 0.5;
            entb += entropy2(prob0_of_llr(total));
        }
        neg[b] = negb;
        ent[b] = entb;
    });
    double pb = 0.0, hb = 0.0;
    for (double v : neg) pb += v;
    for (double v : ent) hb += v;
    return {pb / static_cast<double>(n), hb / static_cast<double>(n)};
}

// Full trajectory. pb[0] uses the all-zero u population (sign of B alone).
inline DeTrajectory run_de(std::size_t var_degree, std::size_t chk_degree,
                           const ChannelModel& channel, std::size_t iterations,
                           const DeSettings& cfg) {
    const std::size_t n = cfg.population_size;
    DeTrajectory traj;
    traj.var_degree = var_degree;
    traj.chk_degree = chk_degree;
    traj.channel_kind = channel.kind();
    traj.channel_param = channel.param();
    traj.population_size = n;
    traj.seed = cfg.seed;

    Population pop_u = Population::constant(n, 0.0);
    const ChannelLlrSampler draw_b(channel);
    Population pop_h;
    pop_h.samples.resize(n);
    detail::de_parallel(n, cfg.blocks, cfg.seed, 0, 3, [&](std::size_t s, Rng& rng) {
        pop_h.samples[s] = draw_b(rng);
    });

    auto [pb0, h0] = de_error_estimate(pop_u, var_degree, channel, cfg, 0);
    traj.pb.push_back(pb0);
    traj.entropy.push_back(h0);

    for (std::size_t t = 1; t <= iterations; ++t) {
        auto [u, h] = de_step(pop_h, var_degree, chk_degree, channel, cfg);
        pop_u = std::move(u);
        pop_h = std::move(h);
        auto [pb, hb] = de_error_estimate(pop_u, var_degree, channel, cfg, t);
        traj.pb.push_back(pb);
        traj.entropy.push_back(hb);
    }
    return traj;
}

// Runs DE at one channel parameter and reports whether the error estimate
// fell below the floor within the iteration budget. Clearly stalled
// trajectories exit early.
inline bool de_decodes(std::size_t var_degree, std::size_t chk_degree,
                       const ChannelModel& channel, const DeSettings& cfg,
                       std::size_t* iterations_used = nullptr) {
    const std::size_t n = cfg.population_size;
    Population pop_h;
    pop_h.samples.resize(n);
    const ChannelLlrSampler draw_b(channel);
    detail::de_parallel(n, cfg.blocks, cfg.seed, 0, 3, [&](std::size_t s, Rng& rng) {
        pop_h.samples[s] = draw_b(rng);
    });

    std::vector<double> history;
    for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
        auto [u, h] = de_step(pop_h, var_degree, chk_degree, channel, cfg);
        pop_h = std::move(h);
        auto [pb, hb] = de_error_estimate(u, var_degree, channel, cfg, t);
        (void)hb;
        if (iterations_used) *iterations_used = t;
        if (pb < cfg.pb_floor) return true;
        history.push_back(pb);
        // Plateau: no progress over the last 60 generations beyond 3 sigma of
        // the estimator noise, well away from the floor.
        const std::size_t w = 60;
        if (history.size() >= 2 * w && pb > 0.005) {
            const auto mid = history.end() - w;
            const double recent = *std::min_element(mid, history.end());
            const double before = *std::min_element(mid - w, mid);
            const double noise = 3.0 * std::sqrt(pb / static_cast<double>(n));
            if (recent >= before - noise) return false;
        }
    }
    return false;
}

struct ThresholdEstimate {
    double value = 0.0;       // bracket midpoint
    double resolution = 0.0;  // half bracket width
    double lower = 0.0, upper = 0.0;
};

// Bisection for the largest channel parameter that still decodes. Every
// probe reuses the same seed so classification noise cancels across probes.
inline ThresholdEstimate bp_threshold(std::size_t var_degree, std::size_t chk_degree,
                                      ChannelKind kind, double tol,
                                      const DeSettings& cfg, double lo = 1e-3,
                                      double hi = 0.499) {
    auto decodes = [&](double p) {
        return de_decodes(var_degree, chk_degree, ChannelModel::make(kind, p), cfg);
    };
    ThresholdEstimate est;
    if (!decodes(lo)) throw std::runtime_error("lower bracket endpoint does not decode");
    if (decodes(hi)) throw std::runtime_error("upper bracket endpoint decodes");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (decodes(mid))
            lo = mid;
        else
            hi = mid;
    }
    est.lower = lo;
    est.upper = hi;
    est.value = 0.5 * (lo + hi);
    est.resolution = 0.5 * (hi - lo);
    return est;
}

// BEC specialization: the erased-message fraction obeys the deterministic
// scalar recursion x_{t+1} = eps * (1 - (1-x_t)^{k-1})^{l-1}, x_0 = eps.
inline std::vector<double> bec_de(double eps, std::size_t var_degree,
                                  std::size_t chk_degree, std::size_t iterations) {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("eps outside [0,1]");
    std::vector<double> xs{eps};
    double x = eps;
    for (std::size_t t = 0; t < iterations; ++t) {
        x = eps * std::pow(1.0 - std::pow(1.0 - x, chk_degree - 1), var_degree - 1);
        xs.push_back(x);
    }
    return xs;
}

inline bool bec_de_dies(double eps, std::size_t l, std::size_t k) {
    double x = eps;
    for (std::size_t t = 0; t < 200000; ++t) {
        const double nx = eps * std::pow(1.0 - std::pow(1.0 - x, k - 1), l - 1);
        if (nx < 1e-12) return true;
        if (std::fabs(nx - x) < 1e-15) return false;  // positive fixed point
        x = nx;
    }
    return false;
}

inline double bec_threshold(std::size_t l, std::size_t k, double tol) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (bec_de_dies(mid, l, k))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sgc

#endif
