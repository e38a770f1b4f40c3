#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sgc/rs_energy.hpp"
#include "support.hpp"

using namespace sgc;

namespace {

RsSettings quick(std::size_t pop, std::size_t samples, std::uint64_t seed) {
    RsSettings cfg;
    cfg.de.population_size = pop;
    cfg.de.seed = seed;
    cfg.samples = samples;
    return cfg;
}

// Two-atom population: mass_zero at 0, the rest at +inf.
Population two_atom(std::size_t size, double mass_zero) {
    Population p;
    p.samples.assign(size, kInf);
    const std::size_t zeros = static_cast<std::size_t>(mass_zero * size + 0.5);
    for (std::size_t i = 0; i < zeros; ++i) p.samples[i] = 0.0;
    return p;
}

// Closed form of the functional for {0, +inf}-valued populations with
// erasure-channel evidence: l h0 (1 - u0) + eps u0^l - (l/k)(1 - (1-h0)^k).
double phi_bec_closed_form(double u0, double h0, double eps, std::size_t l,
                           std::size_t k) {
    return l * h0 * (1.0 - u0) + eps * std::pow(u0, static_cast<double>(l)) -
           (static_cast<double>(l) / k) * (1.0 - std::pow(1.0 - h0, static_cast<double>(k)));
}

}  // namespace

TEST_CASE("functional vanishes identically on the no-error fixed point", "[rs]") {
    const std::size_t n = 20000;
    FixedPointPair pair;
    pair.pop_u = Population::constant(n, kInf);
    pair.pop_h = Population::constant(n, kInf);
    for (auto channel : {ChannelModel::bsc(0.3), ChannelModel::bec(0.7)}) {
        const RsValue v = phi_functional(pair, 3, 6, channel, 200000, 99);
        CHECK(v.value == 0.0);  // exact cancellation, not approximate
        CHECK(v.std_error == 0.0);
    }
}

TEST_CASE("Monte Carlo matches the two-atom closed form on the erasure channel",
          "[rs]") {
    const std::size_t n = 200000;
    for (auto [u0, h0, eps] :
         {std::tuple<double, double, double>{0.3, 0.55, 0.45}, {0.6, 0.42, 0.48},
          {0.15, 0.8, 0.5}}) {
        FixedPointPair pair;
        pair.pop_u = two_atom(n, u0);
        pair.pop_h = two_atom(n, h0);
        const RsValue v =
            phi_functional(pair, 3, 6, ChannelModel::bec(eps), 400000, 7);
        const double expect = phi_bec_closed_form(u0, h0, eps, 3, 6);
        INFO("u0=" << u0 << " h0=" << h0 << " eps=" << eps);
        CHECK(std::fabs(v.value - expect) <= 3.0 * v.std_error + 1e-4);
    }
}

TEST_CASE("entropy estimates by channel regime", "[rs]") {
    SECTION("noiseless: exactly zero") {
        auto cfg = quick(20000, 100000, 1);
        const RsEstimate est =
            rs_entropy_estimate(3, 6, ChannelModel::bsc(0.0), cfg);
        CHECK(est.value.value == 0.0);
    }
    SECTION("below the BP threshold both initializations land on zero") {
        auto cfg = quick(50000, 400000, 2);
        const RsEstimate zero_init = conditional_entropy_rs(
            3, 6, ChannelModel::bsc(0.07), RsInit::ZeroLlr, cfg);
        CHECK(std::fabs(zero_init.value.value) <= 3.0 * zero_init.value.std_error + 1e-5);
        const RsEstimate est = rs_entropy_estimate(3, 6, ChannelModel::bsc(0.07), cfg);
        CHECK(est.value.value <= 3.0 * est.value.std_error + 1e-5);
    }
    SECTION("well above the MAP threshold the estimate is strictly positive") {
        auto cfg = quick(50000, 400000, 3);
        const RsEstimate est = rs_entropy_estimate(3, 6, ChannelModel::bsc(0.12), cfg);
        CHECK(est.value.value > 5.0 * est.value.std_error);
        CHECK(est.value.value > 0.02);
    }
}

TEST_CASE("at most two fixed points show up across initializations", "[rs]") {
    // between p_d and p_c: nontrivial fixed point with negative functional
    auto cfg = quick(50000, 400000, 4);
    const RsEstimate mid = conditional_entropy_rs(3, 6, ChannelModel::bsc(0.09),
                                                  RsInit::ZeroLlr, cfg);
    CHECK(mid.converged);
    CHECK(mid.value.value < -5.0 * mid.value.std_error);
    const RsEstimate sup = rs_entropy_estimate(3, 6, ChannelModel::bsc(0.09), cfg);
    CHECK(sup.value.value == 0.0);  // the no-error branch wins the sup
}

TEST_CASE("erasure-channel crossing sits near the known MAP threshold", "[rs]") {
    // (3,6) over the BEC: the conditional entropy leaves zero around 0.488
    auto cfg = quick(30000, 300000, 5);
    const RsEstimate below = rs_entropy_estimate(3, 6, ChannelModel::bec(0.46), cfg);
    const RsEstimate above = rs_entropy_estimate(3, 6, ChannelModel::bec(0.51), cfg);
    INFO("phi(0.46)=" << below.value.value << " phi(0.51)=" << above.value.value);
    CHECK(below.value.value <= 3.0 * below.value.std_error + 1e-4);
    CHECK(above.value.value > 5.0 * above.value.std_error);
}

TEST_CASE("exact conditional entropy of small codes dominates the RS estimate",
          "[rs]") {
    Rng rng = make_rng(6);
    const TannerGraph g = sample_regular({3, 6, 12}, rng);
    const ParityCheckMatrix h(g);
    auto cfg = quick(50000, 400000, 7);
    for (double p : {0.05, 0.08, 0.11}) {
        const double exact =
            oracle::conditional_entropy_per_bit(h, ChannelModel::bsc(p));
        const RsEstimate rs = rs_entropy_estimate(3, 6, ChannelModel::bsc(p), cfg);
        INFO("p=" << p << " exact=" << exact << " rs=" << rs.value.value);
        CHECK(exact >= rs.value.value - 3.0 * rs.value.std_error - 1e-6);
    }
}

TEST_CASE("standard error halves when the sample count quadruples", "[rs]") {
    const std::size_t n = 50000;
    FixedPointPair pair;
    pair.pop_u = two_atom(n, 0.4);
    pair.pop_h = two_atom(n, 0.5);
    const RsValue small =
        phi_functional(pair, 3, 6, ChannelModel::bec(0.47), 100000, 9);
    const RsValue big =
        phi_functional(pair, 3, 6, ChannelModel::bec(0.47), 400000, 9);
    CHECK(std::fabs(big.std_error - 0.5 * small.std_error) <= 0.25 * 0.5 * small.std_error);
}
