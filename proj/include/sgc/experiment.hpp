#ifndef SGC_EXPERIMENT_HPP
#define SGC_EXPERIMENT_HPP

#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <cstddef>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgc/bitflip.hpp"
#include "sgc/bp.hpp"
#include "sgc/channel.hpp"
#include "sgc/gf2.hpp"
#include "sgc/par.hpp"
#include "sgc/rng.hpp"
#include "sgc/tanner.hpp"

namespace sgc {

enum class DecoderKind { Bp, Flip };
enum class CodewordPolicy { AllZero, Random };

struct ExperimentConfig {
    std::size_t var_degree = 3;
    std::size_t chk_degree = 6;
    std::vector<std::size_t> block_lengths;
    ChannelKind channel = ChannelKind::BSC;
    std::vector<double> params;
    DecoderKind decoder = DecoderKind::Bp;
    CodewordPolicy policy = CodewordPolicy::AllZero;
    std::size_t trials = 1000;
    std::size_t max_iterations = 200;
    std::size_t stop_at_block_errors = 100;
    bool fixed_code = false;  // one draw per point instead of one per trial
    std::uint64_t seed = 1;

    void validate() const {
        if (block_lengths.empty() || params.empty())
            throw std::invalid_argument("empty block length or parameter grid");
        if (policy == CodewordPolicy::AllZero && channel == ChannelKind::ZC)
            throw std::invalid_argument("all-zero policy requires a symmetric channel");
        if (channel == ChannelKind::ZC && policy != CodewordPolicy::Random)
            throw std::invalid_argument("ZC runs must use random codewords");
        if (decoder == DecoderKind::Flip &&
            !(channel == ChannelKind::BSC || channel == ChannelKind::ZC))
            throw std::invalid_argument("bit flipping needs hard binary outputs");
        for (std::size_t n : block_lengths)
            if ((n * var_degree) % chk_degree != 0)
                throw std::invalid_argument("N*l must be divisible by k");
    }
};

struct ErrorRateRecord {
    std::size_t n = 0;
    double param = 0.0;
    double pb = 0.0, pb_ci = 0.0;  // bit error rate, 95% CI half-width
    double pB = 0.0, pB_ci = 0.0;  // block error rate
    std::size_t trials = 0;
    double avg_iters = 0.0;
    // ZC random-codeword statistics
    double type_mean = 0.0;
    double type_max_dev = 0.0;        // max |tau - 1/2| observed
    std::size_t type_violations = 0;  // draws with |tau - 1/2| > 5/sqrt(n)
    double residual_unsat_mean = 0.0;  // flip decoding only
};

// 95% binomial CI half-width: normal approximation, switching below 20
// observed errors to an exact Clopper-Pearson interval.
inline double ci_halfwidth95(std::size_t errors, std::size_t trials) {
    if (trials == 0) return 0.0;
    const double p = static_cast<double>(errors) / static_cast<double>(trials);
    if (errors >= 20 && trials - errors >= 20)
        return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    using boost::math::binomial_distribution;
    const double lo = binomial_distribution<>::find_lower_bound_on_p(
        static_cast<double>(trials), static_cast<double>(errors), 0.025);
    const double hi = binomial_distribution<>::find_upper_bound_on_p(
        static_cast<double>(trials), static_cast<double>(errors), 0.025);
    return 0.5 * (hi - lo);
}

namespace detail {

struct TrialOutcome {
    std::size_t bit_errors = 0;
    bool block_error = false;
    std::size_t iterations = 0;
    double type = 0.5;
    std::size_t residual_unsat = 0;
};

inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t n, double param,
                              const TannerGraph* fixed_graph, Rng& rng) {
    const ChannelModel channel = ChannelModel::make(cfg.channel, param);
    TrialOutcome out;

    TannerGraph graph = fixed_graph
                            ? *fixed_graph
                            : sample_regular({cfg.var_degree, cfg.chk_degree, n}, rng);

    std::vector<std::uint8_t> x(n, 0);
    if (cfg.policy == CodewordPolicy::Random) {
        const ParityCheckMatrix h(graph);
        x = sample_codeword(h, rng).to_bytes();
    }
    std::size_t zeros = 0;
    for (auto b : x) zeros += b == 0;
    out.type = static_cast<double>(zeros) / static_cast<double>(n);

    DecodeResult res;
    if (cfg.decoder == DecoderKind::Flip) {
        std::vector<std::uint8_t> y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = static_cast<std::uint8_t>(
                channel.sample_output(x[i], rng).bit_value());
        res = bit_flip_decode(graph, y, cfg.max_iterations, rng);
        out.residual_unsat = res.unsat_trace.back();
    } else {
        std::vector<double> llrs(n);
        for (std::size_t i = 0; i < n; ++i)
            llrs[i] = channel.llr(channel.sample_output(x[i], rng));
        res = bp_decode(graph, llrs, cfg.max_iterations, rng);
    }
    out.iterations = res.iterations_used;
    for (std::size_t i = 0; i < n; ++i) out.bit_errors += res.estimate[i] != x[i];
    out.block_error = out.bit_errors != 0;
    return out;
}

}  // namespace detail

// Monte Carlo error-rate sweep. Fresh code draw per trial by default; the
// stopping rule ends a point once stop_at_block_errors block errors have
// accumulated, checked at fixed chunk boundaries so that results do not
// depend on the worker count.
inline std::vector<ErrorRateRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ErrorRateRecord> records;
    std::size_t point_index = 0;
    for (std::size_t n : cfg.block_lengths) {
        for (double param : cfg.params) {
            ++point_index;
            std::optional<TannerGraph> fixed;
            if (cfg.fixed_code) {
                Rng rng = make_rng(cfg.seed, point_index, std::uint64_t{0});
                fixed = sample_regular({cfg.var_degree, cfg.chk_degree, n}, rng);
            }

            std::size_t bit_errors = 0, block_errors = 0, trials_done = 0;
            double iter_sum = 0.0, type_sum = 0.0, type_max_dev = 0.0;
            double unsat_sum = 0.0;
            std::size_t type_violations = 0;
            const double type_band = 5.0 / std::sqrt(static_cast<double>(n));

            const std::size_t chunk = 64;
            std::mutex mu;
            while (trials_done < cfg.trials && block_errors < cfg.stop_at_block_errors) {
                const std::size_t batch = std::min(chunk, cfg.trials - trials_done);
                par_for_blocks(batch, 8, [&](std::size_t, std::size_t lo, std::size_t hi) {
                    std::size_t be = 0, blke = 0, tviol = 0;
                    double it = 0.0, ty = 0.0, tdev = 0.0, un = 0.0;
                    for (std::size_t t = lo; t < hi; ++t) {
                        Rng rng = make_rng(cfg.seed, point_index, trials_done + t + 1);
                        const auto o = detail::run_trial(cfg, n, param,
                                                         fixed ? &*fixed : nullptr, rng);
                        be += o.bit_errors;
                        blke += o.block_error;
                        it += static_cast<double>(o.iterations);
                        ty += o.type;
                        tdev = std::max(tdev, std::fabs(o.type - 0.5));
                        tviol += std::fabs(o.type - 0.5) > type_band;
                        un += static_cast<double>(o.residual_unsat);
                    }
                    std::lock_guard<std::mutex> lock(mu);
                    bit_errors += be;
                    block_errors += blke;
                    iter_sum += it;
                    type_sum += ty;
                    type_max_dev = std::max(type_max_dev, tdev);
                    type_violations += tviol;
                    unsat_sum += un;
                });
                trials_done += batch;
            }

            ErrorRateRecord rec;
            rec.n = n;
            rec.param = param;
            rec.trials = trials_done;
            rec.pb = static_cast<double>(bit_errors) /
                     static_cast<double>(trials_done * n);
            rec.pb_ci = ci_halfwidth95(bit_errors, trials_done * n);
            rec.pB = static_cast<double>(block_errors) / static_cast<double>(trials_done);
            rec.pB_ci = ci_halfwidth95(block_errors, trials_done);
            rec.avg_iters = iter_sum / static_cast<double>(trials_done);
            rec.type_mean = type_sum / static_cast<double>(trials_done);
            rec.type_max_dev = type_max_dev;
            rec.type_violations = type_violations;
            rec.residual_unsat_mean = unsat_sum / static_cast<double>(trials_done);
            records.push_back(rec);
        }
    }
    return records;
}

}  // namespace sgc

#endif
