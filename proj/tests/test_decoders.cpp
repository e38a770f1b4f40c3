#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sgc/bitflip.hpp"
#include "sgc/bp.hpp"
#include "sgc/gf2.hpp"
#include "sgc/map_oracle.hpp"
#include "sgc/rng.hpp"
#include "support.hpp"

using namespace sgc;

namespace {

// Random tree Tanner graph: every new check hooks one existing variable to
// a few fresh ones.
TannerGraph random_tree_graph(Rng& rng, std::size_t min_vars) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t vars = 1, checks = 0;
    while (vars < min_vars) {
        const std::size_t anchor = uniform_index(rng, vars);
        const std::size_t fresh = 1 + uniform_index(rng, 3);
        edges.emplace_back(anchor, checks);
        for (std::size_t j = 0; j < fresh; ++j) edges.emplace_back(vars++, checks);
        ++checks;
    }
    return TannerGraph(vars, checks, std::move(edges));
}

std::vector<OutputSymbol> bits_to_symbols(const std::vector<std::uint8_t>& y) {
    std::vector<OutputSymbol> out;
    for (auto b : y) out.push_back(OutputSymbol::bit(b));
    return out;
}

}  // namespace

TEST_CASE("BP on a single parity check with one known bit", "[decoders]") {
    const TannerGraph g = ParityCheckMatrix::from_rows({{1, 1, 1}}).to_graph();
    const std::vector<double> llrs{kInf, 0.0, 0.0};  // erased except the first
    Rng rng = make_rng(2);
    const DecodeResult res = bp_decode(g, llrs, 6, rng);
    CHECK(res.soft[0] == kInf);
    CHECK(res.soft[1] == 0.0);
    CHECK(res.soft[2] == 0.0);
    CHECK(prob0_of_llr(res.soft[1]) == 0.5);
    CHECK(prob0_of_llr(res.soft[2]) == 0.5);
    CHECK(res.estimate[0] == 0);
}

TEST_CASE("certain channel output decodes in zero iterations", "[decoders]") {
    const TannerGraph g = example_hamming_like().to_graph();
    const std::vector<double> llrs(7, kInf);
    Rng rng = make_rng(3);
    const DecodeResult res = bp_decode(g, llrs, 20, rng);
    CHECK(res.iterations_used == 0);
    CHECK(res.converged);
    for (auto b : res.estimate) CHECK(b == 0);
    CHECK(res.tie_breaks == 0);
}

TEST_CASE("BP equals brute-force marginals on trees", "[decoders]") {
    Rng rng = make_rng(17);
    const auto channel = ChannelModel::bsc(0.15);
    for (int trial = 0; trial < 25; ++trial) {
        const TannerGraph g = random_tree_graph(rng, 6 + uniform_index(rng, 8));
        const ParityCheckMatrix h(g);
        REQUIRE_FALSE(girth(g).has_value());

        const Codeword x = sample_codeword(h, rng);
        std::vector<std::uint8_t> y(g.num_vars());
        std::vector<double> llrs(g.num_vars());
        for (std::size_t i = 0; i < g.num_vars(); ++i) {
            y[i] = static_cast<std::uint8_t>(
                channel.sample_output(x.get(i), rng).bit_value());
            llrs[i] = channel.llr(OutputSymbol::bit(y[i]));
        }
        Rng dec_rng = make_rng(trial, 55);
        const DecodeResult bp = bp_decode(g, llrs, g.num_checks() + 5, dec_rng,
                                          nullptr, kLlrCap, false);
        const MapResult map = map_decode_bruteforce(h, channel, bits_to_symbols(y));
        for (std::size_t i = 0; i < g.num_vars(); ++i)
            CHECK(prob0_of_llr(bp.soft[i]) ==
                  Catch::Approx(map.marginals0[i]).margin(1e-10));
        // the BP hard decision agrees with symbol MAP away from ties
        for (std::size_t i = 0; i < g.num_vars(); ++i)
            if (std::fabs(map.marginals0[i] - 0.5) > 1e-9)
                CHECK(bp.estimate[i] == map.symbol_map[i]);
    }
}

TEST_CASE("BP matches the symbol-MAP block error rate on a small code and "
          "never beats it on average",
          "[decoders]") {
    const auto h = example_hamming_like();
    const TannerGraph g = h.to_graph();
    const auto channel = ChannelModel::bsc(0.05);
    Rng rng = make_rng(23);
    const std::size_t trials = 10000;
    std::vector<double> diff;
    std::size_t bp_blocks = 0, map_blocks = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Codeword x = sample_codeword(h, rng);
        std::vector<std::uint8_t> y(7);
        std::vector<double> llrs(7);
        for (std::size_t i = 0; i < 7; ++i) {
            y[i] = static_cast<std::uint8_t>(
                channel.sample_output(x.get(i), rng).bit_value());
            llrs[i] = channel.llr(OutputSymbol::bit(y[i]));
        }
        const DecodeResult bp = bp_decode(g, llrs, 20, rng);
        const MapResult map = map_decode_bruteforce(h, channel, bits_to_symbols(y));
        bool bp_err = false, map_err = false;
        for (std::size_t i = 0; i < 7; ++i) {
            bp_err = bp_err || bp.estimate[i] != x.get(i);
            map_err = map_err || map.symbol_map[i] != x.get(i);
        }
        bp_blocks += bp_err;
        map_blocks += map_err;
        diff.push_back(static_cast<double>(bp_err) - static_cast<double>(map_err));
    }
    const double mean_diff = oracle::mean(diff);
    const double se = oracle::stderr_of_mean(diff);
    INFO("BP block rate " << bp_blocks / 1e4 << ", MAP block rate " << map_blocks / 1e4);
    // MAP optimality: BP never does better. (On this girth-4 graph loopy BP
    // is in fact measurably worse, so no equality check is made.)
    CHECK(mean_diff >= -3.0 * se);
}

TEST_CASE("decoding is codeword-independent on symmetric channels", "[decoders]") {
    const auto h = example_hamming_like();
    const TannerGraph g = h.to_graph();
    const auto channel = ChannelModel::bsc(0.07);
    const auto code = oracle::enumerate_code(h);
    const std::size_t trials = 2000;
    std::vector<double> rates;
    for (std::size_t c = 0; c < code.size(); ++c) {
        Rng rng = make_rng(31, c);
        std::size_t blocks = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<double> llrs(7);
            std::vector<std::uint8_t> x(7);
            for (std::size_t i = 0; i < 7; ++i) {
                x[i] = code[c].get(i);
                llrs[i] = channel.llr(channel.sample_output(x[i], rng));
            }
            const DecodeResult res = bp_decode(g, llrs, 20, rng);
            for (std::size_t i = 0; i < 7; ++i)
                if (res.estimate[i] != x[i]) {
                    ++blocks;
                    break;
                }
        }
        rates.push_back(static_cast<double>(blocks) / trials);
    }
    const double pooled = oracle::mean(rates);
    double chi2 = 0.0;
    for (double r : rates) {
        const double d = (r - pooled) * trials;
        chi2 += d * d / (trials * pooled * (1.0 - pooled));
    }
    INFO("per-codeword block rates pooled at " << pooled << ", chi2 " << chi2);
    CHECK(chi2 < 15.0 + 3.0 * std::sqrt(30.0));
}

TEST_CASE("decoding outcomes are insensitive to raising the LLR cap", "[decoders]") {
    Rng graph_rng = make_rng(37);
    const TannerGraph g = sample_regular({3, 6, 120}, graph_rng);
    const auto channel = ChannelModel::bsc(0.06);
    std::size_t errs25 = 0, errs30 = 0;
    const std::size_t trials = 300;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng noise = make_rng(38, t);
        std::vector<double> llrs(g.num_vars());
        for (auto& v : llrs) v = channel.llr(channel.sample_output(0, noise));
        Rng r1 = make_rng(39, t), r2 = make_rng(39, t);
        const auto a = bp_decode(g, llrs, 50, r1, nullptr, 25.0);
        const auto b = bp_decode(g, llrs, 50, r2, nullptr, 30.0);
        for (std::size_t i = 0; i < g.num_vars(); ++i) {
            errs25 += a.estimate[i] != 0;
            errs30 += b.estimate[i] != 0;
        }
    }
    const double n = static_cast<double>(trials * g.num_vars());
    const double p = (errs25 + errs30) / (2.0 * n);
    const double sigma = std::sqrt(std::max(p * (1.0 - p) / n, 1e-12));
    const double gap = std::fabs(static_cast<double>(errs25) - static_cast<double>(errs30));
    CHECK(gap / n <= 3.0 * sigma + 1e-9);
}

TEST_CASE("unsat_count on hand-evaluated words", "[decoders]") {
    const TannerGraph g = example_hamming_like().to_graph();
    CHECK(unsat_count(g, {0, 0, 0, 0, 0, 0, 0}) == 0);
    CHECK(unsat_count(g, {0, 0, 0, 0, 0, 0, 1}) == 3);  // last column is all ones
    const TannerGraph triple = ParityCheckMatrix::from_rows({{1, 1, 1}}).to_graph();
    CHECK(unsat_count(triple, {1, 0, 0}) == 1);
    CHECK(unsat_count(triple, {1, 1, 0}) == 0);
    CHECK_THROWS(unsat_count(triple, {1, 0}));
}

TEST_CASE("bit flipping: halting, energy descent, single-error correction",
          "[decoders]") {
    const TannerGraph g = example_hamming_like().to_graph();

    Rng rng = make_rng(41);
    const auto cw = sample_codeword(example_hamming_like(), rng).to_bytes();
    const DecodeResult clean = bit_flip_decode(g, cw, 100, rng);
    CHECK(clean.iterations_used == 0);
    CHECK(clean.converged);
    CHECK(clean.estimate == cw);

    bool one_flip_seen = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto y = cw;
        y[6] ^= 1;  // the weight-1 error sits on 3 unsatisfied checks
        CHECK(unsat_count(g, y) == 3);
        Rng r = make_rng(seed, 43);
        const DecodeResult res = bit_flip_decode(g, y, 100, r);
        CHECK(res.converged);  // some codeword is always reached here
        for (std::size_t t = 1; t < res.unsat_trace.size(); ++t)
            CHECK(res.unsat_trace[t] < res.unsat_trace[t - 1]);
        if (res.iterations_used == 1 && res.estimate == cw) one_flip_seen = true;
    }
    CHECK(one_flip_seen);
}

TEST_CASE("bit flipping fixes low-noise blocks at blocklength 10^4", "[decoders]") {
    const std::size_t trials = 200;
    std::size_t good = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(47, t);
        const TannerGraph g = sample_regular({5, 10, 10000}, rng);
        std::vector<std::uint8_t> y(g.num_vars(), 0);
        for (auto& b : y) b = bernoulli(rng, 0.01) ? 1 : 0;
        const DecodeResult res = bit_flip_decode(g, y, g.num_checks(), rng);
        bool ok = res.converged;
        for (auto b : res.estimate) ok = ok && b == 0;
        good += ok;
    }
    CHECK(static_cast<double>(good) / trials > 0.99);
}

TEST_CASE("exhaustive MAP oracle", "[decoders]") {
    const auto h = example_hamming_like();
    const auto channel = ChannelModel::bsc(0.1);

    SECTION("noiseless output returns the codeword with degenerate marginals") {
        Rng rng = make_rng(53);
        const Codeword x = sample_codeword(h, rng);
        std::vector<OutputSymbol> y;
        for (std::size_t i = 0; i < 7; ++i) y.push_back(OutputSymbol::bit(x.get(i)));
        const MapResult res = map_decode_bruteforce(h, channel, y);
        CHECK(res.word_map == x);
        CHECK(res.word_map_ties == 1);
        for (std::size_t i = 0; i < 7; ++i) {
            // residual mass sits on codewords 4 flips away: O((p/(1-p))^4)
            CHECK(res.marginals0[i] ==
                  Catch::Approx(x.get(i) ? 0.0 : 1.0).margin(0.01));
            CHECK(res.symbol_map[i] == x.get(i));
        }
    }

    SECTION("single check over the erasure channel") {
        const auto triple = ParityCheckMatrix::from_rows({{1, 1, 1}});
        const std::vector<OutputSymbol> y{OutputSymbol::bit(0), OutputSymbol::erasure(),
                                          OutputSymbol::erasure()};
        const MapResult res = map_decode_bruteforce(triple, ChannelModel::bec(0.3), y);
        CHECK(res.marginals0[0] == 1.0);
        CHECK(res.marginals0[1] == Catch::Approx(0.5).margin(1e-12));
        CHECK(res.marginals0[2] == Catch::Approx(0.5).margin(1e-12));
        CHECK(res.symbol_ties == 2);
        CHECK(res.word_map_ties == 2);
    }

    SECTION("word MAP is the nearest codeword in Hamming distance for p < 1/2") {
        Rng rng = make_rng(59);
        const auto code = oracle::enumerate_code(h);
        for (int t = 0; t < 200; ++t) {
            std::vector<OutputSymbol> y;
            BitVec ybits(7);
            for (std::size_t i = 0; i < 7; ++i) {
                const int b = bernoulli(rng, 0.5);
                ybits.set(i, b);
                y.push_back(OutputSymbol::bit(b));
            }
            const MapResult res = map_decode_bruteforce(h, channel, y);
            std::size_t best = 8;
            for (const auto& c : code) {
                auto d = c;
                d ^= ybits;
                best = std::min(best, d.popcount());
            }
            auto d = res.word_map;
            d ^= ybits;
            CHECK(d.popcount() == best);
        }
    }

    SECTION("oversized codes are rejected") {
        ParityCheckMatrix wide(1, 30);
        wide.set(0, 0, true);
        std::vector<OutputSymbol> y(30, OutputSymbol::bit(0));
        CHECK_THROWS(map_decode_bruteforce(wide, channel, y));
    }
}
