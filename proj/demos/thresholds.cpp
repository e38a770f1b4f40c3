// Asymptotic analysis of the (3,6) ensemble at a desk-scale population:
// density-evolution trajectories, the BP threshold, and the RS entropy
// estimate on each side of the MAP threshold.

#include <cstdio>

#include "sgc/density_evolution.hpp"
#include "sgc/rs_energy.hpp"

using namespace sgc;

int main() {
    DeSettings de;
    de.population_size = 30000;
    de.seed = 3;

    for (double p : {0.07, 0.09}) {
        const DeTrajectory traj = run_de(3, 6, ChannelModel::bsc(p), 120, de);
        std::printf("p=%.2f: pb start %.4f -> end %.2e\n", p, traj.pb.front(),
                    traj.pb.back());
    }

    const auto bp = bp_threshold(3, 6, ChannelKind::BSC, 0.004, de, 0.05, 0.12);
    std::printf("BP threshold (BSC): %.4f [%.4f, %.4f]\n", bp.value, bp.lower,
                bp.upper);
    std::printf("BP threshold (BEC, scalar recursion): %.6f\n",
                bec_threshold(3, 6, 1e-6));

    RsSettings rs;
    rs.de = de;
    rs.samples = 500000;
    for (double p : {0.095, 0.107}) {
        const auto est = rs_entropy_estimate(3, 6, ChannelModel::bsc(p), rs);
        std::printf("RS entropy at p=%.3f: %.5f +- %.5f bits\n", p, est.value.value,
                    est.value.std_error);
    }
    return 0;
}
