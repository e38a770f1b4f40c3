#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sgc/channel.hpp"
#include "sgc/rng.hpp"

using namespace sgc;

TEST_CASE("transition probabilities of the three discrete channels", "[channels]") {
    CHECK(ChannelModel::bsc(0.1).transition_prob(0, OutputSymbol::bit(0)) == 0.9);
    CHECK(ChannelModel::bsc(0.1).transition_prob(0, OutputSymbol::bit(1)) == 0.1);
    CHECK(ChannelModel::bec(0.3).transition_prob(1, OutputSymbol::erasure()) == 0.3);
    for (double p : {0.0, 0.25, 0.7})
        CHECK(ChannelModel::zc(p).transition_prob(0, OutputSymbol::bit(1)) == 0.0);
    CHECK(ChannelModel::zc(0.25).transition_prob(1, OutputSymbol::bit(0)) == 0.25);
}

TEST_CASE("alphabet mismatches are rejected", "[channels]") {
    CHECK_THROWS(ChannelModel::bsc(0.1).transition_prob(0, OutputSymbol::erasure()));
    CHECK_THROWS(ChannelModel::bsc(0.1).llr(OutputSymbol::real(0.3)));
    CHECK_THROWS(ChannelModel::awgn(1.0).transition_prob(0, OutputSymbol::bit(0)));
    CHECK_THROWS(ChannelModel::awgn(-1.0));
    CHECK_THROWS(ChannelModel::bsc(1.5));
}

TEST_CASE("rows of the transition kernel normalize to one", "[channels]") {
    for (int x : {0, 1}) {
        for (double p : {0.0, 0.1, 0.5, 0.9}) {
            const auto bsc = ChannelModel::bsc(p);
            CHECK(bsc.transition_prob(x, OutputSymbol::bit(0)) +
                      bsc.transition_prob(x, OutputSymbol::bit(1)) ==
                  Catch::Approx(1.0).margin(1e-15));
            const auto bec = ChannelModel::bec(p);
            CHECK(bec.transition_prob(x, OutputSymbol::bit(0)) +
                      bec.transition_prob(x, OutputSymbol::bit(1)) +
                      bec.transition_prob(x, OutputSymbol::erasure()) ==
                  Catch::Approx(1.0).margin(1e-15));
            const auto zc = ChannelModel::zc(p);
            CHECK(zc.transition_prob(x, OutputSymbol::bit(0)) +
                      zc.transition_prob(x, OutputSymbol::bit(1)) ==
                  Catch::Approx(1.0).margin(1e-15));
        }
        for (double sigma : {0.5, 1.0, 2.0}) {
            const auto awgn = ChannelModel::awgn(sigma);
            const double mass = detail::adaptive_simpson(
                [&](double y) { return awgn.transition_prob(x, OutputSymbol::real(y)); },
                -1.0 - 14.0 * sigma, 1.0 + 14.0 * sigma, 1e-13);
            CHECK(mass == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("sampling is exact in the degenerate cases and unbiased in the law "
          "of large numbers",
          "[channels]") {
    Rng rng = make_rng(12);
    for (int i = 0; i < 200; ++i) {
        const auto y = ChannelModel::bsc(0.0).sample_output(0, rng);
        REQUIRE(y.bit_value() == 0);
        REQUIRE(ChannelModel::bec(1.0).sample_output(1, rng).is_erasure());
    }
    const auto bsc = ChannelModel::bsc(0.1);
    std::size_t flips = 0;
    const std::size_t trials = 1000000;
    for (std::size_t i = 0; i < trials; ++i)
        flips += bsc.sample_output(0, rng).bit_value();
    CHECK(std::fabs(static_cast<double>(flips) / trials - 0.1) < 0.001);
}

TEST_CASE("log-likelihood ratios, half convention", "[channels]") {
    CHECK(ChannelModel::bsc(0.1).llr(OutputSymbol::bit(0)) ==
          Catch::Approx(0.5 * std::log(9.0)));
    CHECK(ChannelModel::bec(0.3).llr(OutputSymbol::erasure()) == 0.0);
    CHECK(ChannelModel::bec(0.3).llr(OutputSymbol::bit(0)) == kInf);
    CHECK(ChannelModel::bec(0.3).llr(OutputSymbol::bit(1)) == -kInf);
    CHECK(ChannelModel::zc(0.25).llr(OutputSymbol::bit(1)) == -kInf);
    CHECK(ChannelModel::zc(0.25).llr(OutputSymbol::bit(0)) ==
          Catch::Approx(0.5 * std::log(4.0)));
    CHECK(ChannelModel::awgn(0.5).llr(OutputSymbol::real(0.7)) ==
          Catch::Approx(0.7 / 0.25));
}

TEST_CASE("llr odd under the channel involution", "[channels]") {
    Rng rng = make_rng(77);
    const auto bsc = ChannelModel::bsc(0.2);
    CHECK(bsc.llr(OutputSymbol::bit(0)) == -bsc.llr(OutputSymbol::bit(1)));
    const auto bec = ChannelModel::bec(0.4);
    CHECK(bec.llr(OutputSymbol::bit(0)) == -bec.llr(OutputSymbol::bit(1)));
    CHECK(bec.llr(OutputSymbol::erasure()) == -bec.llr(OutputSymbol::erasure()));
    const auto awgn = ChannelModel::awgn(0.8);
    for (int i = 0; i < 50; ++i) {
        const double y = awgn.sample_output(i % 2, rng).value;
        CHECK(awgn.llr(OutputSymbol::real(y)) ==
              Catch::Approx(-awgn.llr(OutputSymbol::real(-y))).margin(1e-12));
    }
}

TEST_CASE("capacity spot values", "[channels]") {
    CHECK(ChannelModel::bsc(0.110028).capacity() == Catch::Approx(0.5).margin(1e-4));
    CHECK(ChannelModel::bec(0.3).capacity() == 0.7);
    CHECK(ChannelModel::zc(1e-9).capacity() == Catch::Approx(1.0).margin(1e-6));
    CHECK(ChannelModel::zc_optimal_alpha(1e-9) == Catch::Approx(0.5).margin(1e-6));
    // AWGN capacity decreases with noise and stays in (0,1)
    double prev = 1.0;
    for (double sigma : {0.3, 0.6, 1.0, 1.5}) {
        const double c = ChannelModel::awgn(sigma).capacity();
        CHECK(c > 0.0);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("capacity of the BSC is strictly decreasing on [0, 1/2]", "[channels]") {
    double prev = 1.0 + 1e-12;
    for (double p = 0.0; p <= 0.5 + 1e-12; p += 0.01) {
        const double c = ChannelModel::bsc(std::min(p, 0.5)).capacity();
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("uniform input rate equals capacity on symmetric channels", "[channels]") {
    for (double p = 0.02; p < 0.5; p += 0.03)
        CHECK(ChannelModel::bsc(p).uniform_input_rate() ==
              ChannelModel::bsc(p).capacity());
    CHECK(ChannelModel::zc(0.5).uniform_input_rate() ==
          Catch::Approx(entropy2(0.25) - 0.5).margin(1e-12));
    CHECK(ChannelModel::zc(0.5).uniform_input_rate() ==
          Catch::Approx(0.311278).margin(1e-6));
}

TEST_CASE("ZC: the closed-form input bias maximizes the information rate",
          "[channels]") {
    for (int i = 1; i <= 10; ++i) {
        const double p = i / 11.0;
        const double best = ChannelModel::mutual_information_zc(
            ChannelModel::zc_optimal_alpha(p), p);
        for (int j = 1; j < 2000; ++j) {
            const double alpha = j / 2000.0;
            CHECK(ChannelModel::mutual_information_zc(alpha, p) <= best + 1e-6);
        }
    }
}

TEST_CASE("ZC: uniform-input rate stays above 0.92 of capacity", "[channels]") {
    double worst = 1.0;
    for (double p = 0.05; p < 0.96; p += 0.05) {
        const auto zc = ChannelModel::zc(p);
        worst = std::min(worst, zc.uniform_input_rate() / zc.capacity());
    }
    INFO("measured minimum uniform-input fraction of capacity: " << worst);
    CHECK(worst >= 0.92);
}
