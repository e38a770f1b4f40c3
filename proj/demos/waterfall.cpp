// Minimal library walkthrough: draw a code, push a block through a BSC,
// decode it both ways, then sweep a short error-rate curve.

#include <cstdio>

#include "sgc/bitflip.hpp"
#include "sgc/bp.hpp"
#include "sgc/emit.hpp"
#include "sgc/experiment.hpp"

using namespace sgc;

int main() {
    Rng rng = make_rng(7);
    const TannerGraph graph = sample_regular({3, 6, 2048}, rng);
    const ChannelModel channel = ChannelModel::bsc(0.05);

    std::vector<double> llrs(graph.num_vars());
    std::vector<std::uint8_t> hard(graph.num_vars());
    for (std::size_t i = 0; i < llrs.size(); ++i) {
        const auto y = channel.sample_output(0, rng);
        hard[i] = static_cast<std::uint8_t>(y.bit_value());
        llrs[i] = channel.llr(y);
    }

    const DecodeResult bp = bp_decode(graph, llrs, 100, rng);
    std::printf("BP: converged=%d after %zu iterations\n", bp.converged,
                bp.iterations_used);

    const DecodeResult flip = bit_flip_decode(graph, hard, graph.num_checks(), rng);
    std::printf("bit flipping: converged=%d after %zu flips, residual unsat %zu\n",
                flip.converged, flip.iterations_used, flip.unsat_trace.back());

    ExperimentConfig cfg;
    cfg.block_lengths = {1024};
    cfg.params = {0.04, 0.06, 0.08};
    cfg.trials = 100;
    cfg.max_iterations = 60;
    cfg.seed = 11;
    for (const auto& rec : run_experiment(cfg))
        std::printf("p=%.3f: P_b %.2e, P_B %.3f (%zu trials)\n", rec.param, rec.pb,
                    rec.pB, rec.trials);
    return 0;
}
