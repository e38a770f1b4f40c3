#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sgc/density_evolution.hpp"
#include "support.hpp"

using namespace sgc;

namespace {

DeSettings quick(std::size_t pop, std::uint64_t seed) {
    DeSettings cfg;
    cfg.population_size = pop;
    cfg.seed = seed;
    return cfg;
}

double erased_fraction(const Population& p) {
    std::size_t z = 0;
    for (double v : p.samples) z += v == 0.0;
    return static_cast<double>(z) / static_cast<double>(p.samples.size());
}

}  // namespace

TEST_CASE("erasure noise keeps the populations two-valued", "[de]") {
    const DeSettings cfg = quick(20000, 3);
    const ChannelModel bec = ChannelModel::bec(0.42);
    Population pop_h = Population::constant(cfg.population_size, 0.0);
    for (int t = 0; t < 10; ++t) {
        auto [u, h] = de_step(pop_h, 3, 6, bec, cfg);
        pop_h = std::move(h);
        for (double v : u.samples) CHECK((v == 0.0 || v == kInf));
        for (double v : pop_h.samples) CHECK((v == 0.0 || v == kInf));
    }
}

TEST_CASE("noiseless channel drives the variable population to certainty in "
          "one step",
          "[de]") {
    const DeSettings cfg = quick(5000, 4);
    Population pop_h = Population::constant(cfg.population_size, 0.0);
    auto [u, h] = de_step(pop_h, 3, 6, ChannelModel::bsc(0.0), cfg);
    for (double v : h.samples) CHECK(v == kInf);
}

TEST_CASE("the first error estimate is the raw channel error rate", "[de]") {
    for (double p : {0.05, 0.084, 0.3}) {
        DeSettings cfg = quick(100000, 5);
        const DeTrajectory traj = run_de(3, 6, ChannelModel::bsc(p), 0, cfg);
        const double sigma = std::sqrt(p * (1.0 - p) / 1e5);
        CHECK(std::fabs(traj.pb[0] - p) <= 3.0 * sigma);
        CHECK(traj.entropy[0] <= 1.0);
    }
}

TEST_CASE("trajectories: decay below threshold, plateau above", "[de]") {
    DeSettings cfg = quick(100000, 6);

    std::size_t iters = 0;
    CHECK(de_decodes(3, 6, ChannelModel::bsc(0.07), cfg, &iters));
    CHECK(iters <= 200);

    const DeTrajectory at = run_de(3, 6, ChannelModel::bsc(0.084), 60, cfg);
    CHECK(at.pb.back() < at.pb.front());
    for (std::size_t t = 10; t + 10 < at.pb.size(); t += 10)
        CHECK(at.pb[t + 10] <= at.pb[t] + 3e-3);
    for (std::size_t t = 0; t + 1 < at.entropy.size(); t += 15)
        CHECK(at.entropy[t + 1] <= at.entropy[t] + 3e-3);

    const DeTrajectory above = run_de(3, 6, ChannelModel::bsc(0.10), 120, cfg);
    CHECK(above.pb.back() > 0.01);
}

TEST_CASE("bit error is monotone in the crossover probability", "[de]") {
    DeSettings cfg = quick(30000, 7);
    double prev = -1.0;
    for (double p : {0.05, 0.07, 0.09, 0.11}) {
        const DeTrajectory traj = run_de(3, 6, ChannelModel::bsc(p), 150, cfg);
        CHECK(traj.pb.back() >= prev - 3e-3);
        prev = traj.pb.back();
    }
    CHECK(prev > 0.0);
}

TEST_CASE("populations stay symmetric in the coding sense", "[de]") {
    DeSettings cfg = quick(100000, 8);
    const ChannelModel ch = ChannelModel::bsc(0.06);
    Population pop_h = Population::constant(cfg.population_size, 0.0);
    for (int t = 0; t < 10; ++t) {
        auto [u, h] = de_step(pop_h, 3, 6, ch, cfg);
        pop_h = std::move(h);
    }
    // E[ f(-h) e^{-2h} ] = E[ f(h) ] for bin indicators f on the positive axis
    for (auto [lo, hi] : {std::pair{0.3, 0.8}, {0.8, 1.5}, {1.5, 2.5}}) {
        std::vector<double> lhs, rhs;
        for (double v : pop_h.samples) {
            lhs.push_back((-v >= lo && -v < hi) ? std::exp(-2.0 * v) : 0.0);
            rhs.push_back((v >= lo && v < hi) ? 1.0 : 0.0);
        }
        const double se = std::sqrt(std::pow(oracle::stderr_of_mean(lhs), 2) +
                                    std::pow(oracle::stderr_of_mean(rhs), 2));
        INFO("bin [" << lo << "," << hi << ")");
        CHECK(std::fabs(oracle::mean(lhs) - oracle::mean(rhs)) <= 3.0 * se);
    }
}

TEST_CASE("scalar erasure recursion: endpoints and the (3,6) threshold", "[de]") {
    const auto zero = bec_de(0.0, 3, 6, 50);
    for (double x : zero) CHECK(x == 0.0);
    const auto one = bec_de(1.0, 3, 6, 50);
    CHECK(one.back() == 1.0);

    const double thr = bec_threshold(3, 6, 1e-6);
    CHECK(thr == Catch::Approx(0.4294398).margin(2e-6));

    // population dynamics restricted to {0, +inf} reproduces the scalar
    // recursion trajectory; the tolerance envelope carries the sampling
    // variance through the recursion derivative
    DeSettings cfg = quick(100000, 9);
    const double eps = 0.40;
    const auto scalar = bec_de(eps, 3, 6, 10);
    auto step = [&](double x) {
        return eps * std::pow(1.0 - std::pow(1.0 - x, 5.0), 2.0);
    };
    Population pop_h;
    pop_h.samples.resize(cfg.population_size);
    const ChannelLlrSampler draw(ChannelModel::bec(eps));
    {
        Rng rng = make_rng(cfg.seed, 999);
        for (auto& v : pop_h.samples) v = draw(rng);
    }
    double var = eps * (1.0 - eps) / 1e5;
    for (std::size_t t = 1; t <= 10; ++t) {
        auto [u, h] = de_step(pop_h, 3, 6, ChannelModel::bec(eps), cfg);
        pop_h = std::move(h);
        const double frac = erased_fraction(pop_h);
        const double slope =
            (step(scalar[t - 1] + 1e-6) - step(scalar[t - 1] - 1e-6)) / 2e-6;
        var = slope * slope * var + scalar[t] * (1.0 - scalar[t]) / 1e5;
        CHECK(std::fabs(frac - scalar[t]) <= 3.0 * std::sqrt(var) + 1e-4);
    }
}

TEST_CASE("population threshold agrees with the scalar-recursion threshold on "
          "the erasure channel",
          "[de]") {
    DeSettings cfg = quick(30000, 10);
    cfg.max_iterations = 800;
    const ThresholdEstimate pop_thr = bp_threshold(3, 6, ChannelKind::BEC, 0.002,
                                                   cfg, 0.38, 0.47);
    const double scalar_thr = bec_threshold(3, 6, 1e-6);
    INFO("population " << pop_thr.value << " vs scalar " << scalar_thr);
    CHECK(std::fabs(pop_thr.value - scalar_thr) <= 0.002 + pop_thr.resolution);
}

TEST_CASE("threshold estimates are stable in the population size", "[de]") {
    DeSettings small = quick(25000, 11);
    DeSettings large = quick(100000, 11);
    const auto t_small = bp_threshold(3, 6, ChannelKind::BSC, 0.004, small, 0.06, 0.11);
    const auto t_large = bp_threshold(3, 6, ChannelKind::BSC, 0.004, large, 0.06, 0.11);
    INFO("N=25k: " << t_small.value << "  N=100k: " << t_large.value);
    CHECK(std::fabs(t_small.value - t_large.value) <=
          t_small.resolution + t_large.resolution + 0.002);
}
