// Command-line workbench over the sgc library. Subcommands mirror the
// library modules: codes, decode, de, we, rs, gec, sat, experiment, scaling,
// channel. Output lands in --out (or $SGC_OUT, or the working directory).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sgc/bitflip.hpp"
#include "sgc/bp.hpp"
#include "sgc/channel.hpp"
#include "sgc/density_evolution.hpp"
#include "sgc/emit.hpp"
#include "sgc/experiment.hpp"
#include "sgc/factor_graph.hpp"
#include "sgc/gf2.hpp"
#include "sgc/markov.hpp"
#include "sgc/rs_energy.hpp"
#include "sgc/sat.hpp"
#include "sgc/scaling.hpp"
#include "sgc/weight_enum.hpp"

using json = nlohmann::json;

namespace {

std::string out_path(const std::string& dir_flag, const std::string& name) {
    std::string dir = dir_flag;
    if (dir.empty()) {
        if (const char* env = std::getenv("SGC_OUT")) dir = env;
    }
    if (dir.empty()) return name;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

sgc::TannerGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return sgc::from_alist(in);
}

sgc::MarkovChannelSpec load_gec_spec(const std::string& path) {
    const json j = json::parse(sgc::read_file(path));
    std::vector<std::vector<double>> P = j.at("P");
    std::vector<double> eps = j.at("eps");
    std::optional<std::vector<double>> init;
    if (j.contains("initial")) init = j.at("initial").get<std::vector<double>>();
    return sgc::MarkovChannelSpec(P, eps, init);
}

json decode_result_json(const sgc::DecodeResult& res) {
    json j;
    j["converged"] = res.converged;
    j["iterations"] = res.iterations_used;
    j["tie_breaks"] = res.tie_breaks;
    j["estimate"] = res.estimate;
    if (!res.unsat_trace.empty()) j["unsat_trace"] = res.unsat_trace;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-graph coding workbench"};
    app.set_config("--config", "", "read options from a key/value file with sections");
    app.require_subcommand(1);

    std::string out_dir;
    app.add_option("--out", out_dir, "output directory (default $SGC_OUT or cwd)");

    // ---- channel ----
    auto* channel_cmd = app.add_subcommand("channel", "capacity and rate of one channel");
    std::string ch_kind = "bsc";
    double ch_param = 0.1;
    channel_cmd->add_option("--kind", ch_kind, "bsc|bec|zc|awgn");
    channel_cmd->add_option("--param", ch_param, "crossover / erasure / sigma");
    channel_cmd->callback([&] {
        const auto ch = sgc::ChannelModel::make(ch_kind, ch_param);
        std::printf("capacity %.6f bits/use\n", ch.capacity());
        std::printf("uniform-input rate %.6f bits/use\n", ch.uniform_input_rate());
    });

    // ---- codes ----
    auto* codes_cmd = app.add_subcommand("codes", "code-ensemble operations");
    auto* codes_sample = codes_cmd->add_subcommand("sample", "draw one regular graph");
    std::size_t cs_l = 3, cs_k = 6, cs_n = 1024;
    std::uint64_t cs_seed = 1;
    std::string cs_out = "graph.alist";
    codes_sample->add_option("--l", cs_l, "variable degree");
    codes_sample->add_option("--k", cs_k, "check degree");
    codes_sample->add_option("--n", cs_n, "blocklength");
    codes_sample->add_option("--seed", cs_seed, "RNG seed");
    codes_sample->add_option("--out-file", cs_out, "alist output file");
    codes_sample->callback([&] {
        sgc::Rng rng = sgc::make_rng(cs_seed);
        sgc::SampleStats stats;
        const auto g = sgc::sample_regular({cs_l, cs_k, cs_n}, rng, &stats);
        const sgc::ParityCheckMatrix h(g);
        const std::string path = out_path(out_dir, cs_out);
        sgc::write_file(path, sgc::to_alist(g));
        std::printf("wrote %s: N=%zu M=%zu edges=%zu multi-pairs resolved=%zu\n",
                    path.c_str(), g.num_vars(), g.num_checks(), g.num_edges(),
                    stats.multi_pairs);
        std::printf("design rate %.6f, actual rate %.6f\n",
                    1.0 - static_cast<double>(cs_l) / cs_k,
                    1.0 - static_cast<double>(h.rank()) / g.num_vars());
    });

    // ---- decode ----
    auto* decode_cmd = app.add_subcommand("decode", "decode one simulated block");
    std::string dc_algo = "bp", dc_graph, dc_kind = "bsc", dc_codeword = "zero";
    double dc_param = 0.05;
    std::size_t dc_iters = 200;
    std::uint64_t dc_seed = 1;
    decode_cmd->add_option("algorithm", dc_algo, "bp|flip")->required();
    decode_cmd->add_option("--graph", dc_graph, "alist file")->required();
    decode_cmd->add_option("--channel", dc_kind, "bsc|bec|zc|awgn");
    decode_cmd->add_option("--p", dc_param, "channel parameter");
    decode_cmd->add_option("--max-iter", dc_iters, "iteration cap");
    decode_cmd->add_option("--seed", dc_seed, "RNG seed");
    decode_cmd->add_option("--codeword", dc_codeword, "zero|random transmitted word");
    decode_cmd->callback([&] {
        const auto g = load_graph(dc_graph);
        const auto channel = sgc::ChannelModel::make(dc_kind, dc_param);
        sgc::Rng rng = sgc::make_rng(dc_seed);
        std::vector<std::uint8_t> x(g.num_vars(), 0);
        if (dc_codeword == "random")
            x = sgc::sample_codeword(sgc::ParityCheckMatrix(g), rng).to_bytes();
        sgc::DecodeResult res;
        if (dc_algo == "flip") {
            std::vector<std::uint8_t> y(g.num_vars());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = static_cast<std::uint8_t>(
                    channel.sample_output(x[i], rng).bit_value());
            res = sgc::bit_flip_decode(g, y, g.num_checks(), rng);
        } else {
            std::vector<double> llrs(g.num_vars());
            for (std::size_t i = 0; i < llrs.size(); ++i)
                llrs[i] = channel.llr(channel.sample_output(x[i], rng));
            res = sgc::bp_decode(g, llrs, dc_iters, rng, &x);
        }
        json j = decode_result_json(res);
        std::size_t errs = 0;
        for (std::size_t i = 0; i < x.size(); ++i) errs += res.estimate[i] != x[i];
        j["bit_errors"] = errs;
        std::cout << j.dump(2) << "\n";
    });

    // ---- de ----
    auto* de_cmd = app.add_subcommand("de", "density evolution");
    std::size_t de_l = 3, de_k = 6, de_pop = 100000, de_iters = 200;
    std::string de_kind = "bsc";
    double de_param = 0.07, de_tol = 0.002, de_lo = 0.001, de_hi = 0.499;
    std::uint64_t de_seed = 1;
    auto add_de_common = [&](CLI::App* cmd) {
        cmd->add_option("--l", de_l, "variable degree");
        cmd->add_option("--k", de_k, "check degree");
        cmd->add_option("--channel", de_kind, "bsc|bec|awgn");
        cmd->add_option("--pop", de_pop, "population size");
        cmd->add_option("--seed", de_seed, "RNG seed");
    };
    auto* de_run = de_cmd->add_subcommand("run", "trajectory at one parameter");
    add_de_common(de_run);
    de_run->add_option("--p", de_param, "channel parameter");
    de_run->add_option("--iters", de_iters, "iterations");
    de_run->callback([&] {
        sgc::DeSettings cfg;
        cfg.population_size = de_pop;
        cfg.seed = de_seed;
        const auto traj = sgc::run_de(de_l, de_k, sgc::ChannelModel::make(de_kind, de_param),
                                      de_iters, cfg);
        const std::string path = out_path(out_dir, "de_trajectory.csv");
        sgc::write_file(path, sgc::trajectory_to_csv(traj));
        std::printf("wrote %s (final pb %.3e)\n", path.c_str(), traj.pb.back());
    });
    auto* de_thr = de_cmd->add_subcommand("threshold", "bisect the BP threshold");
    add_de_common(de_thr);
    de_thr->add_option("--tol", de_tol, "bracket width");
    de_thr->add_option("--lo", de_lo, "initial lower bracket");
    de_thr->add_option("--hi", de_hi, "initial upper bracket");
    de_thr->callback([&] {
        sgc::DeSettings cfg;
        cfg.population_size = de_pop;
        cfg.seed = de_seed;
        const auto est = sgc::bp_threshold(de_l, de_k,
                                           sgc::channel_kind_from_string(de_kind),
                                           de_tol, cfg, de_lo, de_hi);
        std::printf("threshold %.6f (bracket [%.6f, %.6f])\n", est.value, est.lower,
                    est.upper);
    });

    // ---- we ----
    auto* we_cmd = app.add_subcommand("we", "weight enumerator");
    std::size_t we_l = 3, we_k = 6, we_grid = 200, we_n = 120, we_w = 10;
    auto* we_curve = we_cmd->add_subcommand("curve", "growth-rate curve");
    we_curve->add_option("--l", we_l, "variable degree");
    we_curve->add_option("--k", we_k, "check degree");
    we_curve->add_option("--grid", we_grid, "points on (0,1)");
    we_curve->callback([&] {
        sgc::GrowthRateCurve curve;
        curve.var_degree = we_l;
        curve.chk_degree = we_k;
        for (std::size_t i = 1; i < we_grid; ++i) {
            const double omega = static_cast<double>(i) / we_grid;
            try {
                const auto sp = sgc::growth_rate(we_l, we_k, omega);
                curve.omega.push_back(omega);
                curve.phi.push_back(sp.phi);
                curve.z.push_back(sp.z);
            } catch (const std::exception&) {
                break;  // beyond the reachable weight range (odd k)
            }
        }
        const std::string path = out_path(out_dir, "we_curve.csv");
        sgc::write_file(path, sgc::curve_to_csv(curve));
        try {
            std::printf("omega_star %.5f\n", sgc::omega_star(we_l, we_k, 1e-5));
        } catch (const std::exception& e) {
            std::printf("omega_star: %s\n", e.what());
        }
        std::printf("wrote %s\n", path.c_str());
    });
    auto* we_exact = we_cmd->add_subcommand("exact", "exact expected enumerator");
    we_exact->add_option("--l", we_l, "variable degree");
    we_exact->add_option("--k", we_k, "check degree");
    we_exact->add_option("--n", we_n, "blocklength");
    we_exact->add_option("--w", we_w, "weight");
    we_exact->callback([&] {
        const auto v = sgc::expected_weight_enumerator(we_l, we_k, we_n, we_w);
        std::cout << "expected count = " << v << " ~= " << v.convert_to<double>()
                  << "\n";
    });

    // ---- rs ----
    auto* rs_cmd = app.add_subcommand("rs", "replica-symmetric entropy");
    std::size_t rs_l = 3, rs_k = 6, rs_pop = 60000, rs_samples = 2000000;
    std::string rs_kind = "bsc";
    double rs_param = 0.10, rs_tol = 0.003, rs_lo = 0.05, rs_hi = 0.2;
    std::uint64_t rs_seed = 1;
    auto add_rs_common = [&](CLI::App* cmd) {
        cmd->add_option("--l", rs_l, "variable degree");
        cmd->add_option("--k", rs_k, "check degree");
        cmd->add_option("--channel", rs_kind, "bsc|bec");
        cmd->add_option("--pop", rs_pop, "population size");
        cmd->add_option("--samples", rs_samples, "Monte Carlo samples");
        cmd->add_option("--seed", rs_seed, "RNG seed");
    };
    auto* rs_entropy = rs_cmd->add_subcommand("entropy", "entropy estimate at one point");
    add_rs_common(rs_entropy);
    rs_entropy->add_option("--p", rs_param, "channel parameter");
    rs_entropy->callback([&] {
        sgc::RsSettings cfg;
        cfg.de.population_size = rs_pop;
        cfg.de.seed = rs_seed;
        cfg.samples = rs_samples;
        const auto est = sgc::rs_entropy_estimate(
            rs_l, rs_k, sgc::ChannelModel::make(rs_kind, rs_param), cfg);
        json j{{"value_bits", est.value.value},
               {"std_error", est.value.std_error},
               {"samples", est.value.samples},
               {"fp_residual", est.residual},
               {"fp_iterations", est.iterations},
               {"fp_converged", est.converged}};
        std::cout << j.dump(2) << "\n";
    });
    auto* rs_thr = rs_cmd->add_subcommand("threshold", "bisect the MAP threshold");
    add_rs_common(rs_thr);
    rs_thr->add_option("--tol", rs_tol, "bracket width");
    rs_thr->add_option("--lo", rs_lo, "initial lower bracket");
    rs_thr->add_option("--hi", rs_hi, "initial upper bracket");
    rs_thr->callback([&] {
        sgc::RsSettings cfg;
        cfg.de.population_size = rs_pop;
        cfg.de.seed = rs_seed;
        cfg.samples = rs_samples;
        const auto est = sgc::map_threshold(rs_l, rs_k,
                                            sgc::channel_kind_from_string(rs_kind),
                                            rs_tol, cfg, rs_lo, rs_hi);
        std::printf("threshold %.6f (bracket [%.6f, %.6f])\n", est.value, est.lower,
                    est.upper);
    });

    // ---- gec ----
    auto* gec_cmd = app.add_subcommand("gec", "finite-state Markov channel");
    auto* gec_rates = gec_cmd->add_subcommand("rates", "entropy and information rates");
    std::string gec_spec_path;
    std::size_t gec_n = 1000000;
    std::uint64_t gec_seed = 1;
    gec_rates->add_option("--spec", gec_spec_path, "JSON with P (column-stochastic), eps")
        ->required();
    gec_rates->add_option("--n", gec_n, "sequence length");
    gec_rates->add_option("--seed", gec_seed, "RNG seed");
    gec_rates->callback([&] {
        const auto spec = load_gec_spec(gec_spec_path);
        const auto p = sgc::steady_state(spec);
        const auto rates = sgc::entropy_rates(spec, gec_n, gec_seed);
        json j{{"steady_state", p},
               {"ergodic", spec.ergodic},
               {"hy_per_use", rates.hy},
               {"hxy_per_use", rates.hxy},
               {"information_rate", rates.info}};
        double eps_avg = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) eps_avg += p[i] * spec.eps[i];
        j["eps_avg"] = eps_avg;
        j["memoryless_rate"] = 1.0 - sgc::entropy2(eps_avg);
        std::cout << j.dump(2) << "\n";
    });
    auto* gec_decode = gec_cmd->add_subcommand("decode", "joint decoding demo run");
    std::string gd_graph;
    std::size_t gd_rounds = 40;
    std::uint64_t gd_seed = 1;
    gec_decode->add_option("--spec", gec_spec_path, "JSON channel spec")->required();
    gec_decode->add_option("--graph", gd_graph, "alist file")->required();
    gec_decode->add_option("--rounds", gd_rounds, "estimation/decoding rounds");
    gec_decode->add_option("--seed", gd_seed, "RNG seed");
    gec_decode->callback([&] {
        const auto spec = load_gec_spec(gec_spec_path);
        const auto g = load_graph(gd_graph);
        sgc::Rng rng = sgc::make_rng(gd_seed);
        const auto seq = sgc::sample_sequence(spec, g.num_vars(), rng);
        std::vector<std::uint8_t> y(g.num_vars());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = seq.inputs[i] ^ seq.outputs[i];  // all-zero codeword sent
        const auto res = sgc::joint_decode_gec(g, spec, y, gd_rounds, rng);
        std::size_t errs = 0;
        for (auto b : res.decode.estimate) errs += b != 0;
        json j = decode_result_json(res.decode);
        j["bit_errors"] = errs;
        // per-bit channel estimates, half- and full-log conventions
        j["chain_llr_half"] = res.chain_llr;
        std::vector<double> full(res.chain_llr.size());
        for (std::size_t i = 0; i < full.size(); ++i) full[i] = 2.0 * res.chain_llr[i];
        j["chain_llr_full"] = full;
        const std::string path = out_path(out_dir, "gec_decode.json");
        sgc::write_file(path, j.dump(2));
        std::printf("wrote %s (bit errors %zu, converged %d)\n", path.c_str(), errs,
                    res.decode.converged);
    });

    // ---- sat ----
    auto* sat_cmd = app.add_subcommand("sat", "satisfiability factor graphs");
    auto* sat_marg = sat_cmd->add_subcommand("marginals", "BP and exact marginals");
    std::string sat_cnf;
    std::size_t sat_n = 20, sat_k = 3, sat_iters = 100;
    double sat_alpha = 2.0;
    std::uint64_t sat_seed = 1;
    sat_marg->add_option("--cnf", sat_cnf, "DIMACS file (otherwise --random)");
    sat_marg->add_option("--random-n", sat_n, "variables for a random draw");
    sat_marg->add_option("--alpha", sat_alpha, "clause density");
    sat_marg->add_option("--k", sat_k, "literals per clause");
    sat_marg->add_option("--iters", sat_iters, "BP iterations");
    sat_marg->add_option("--seed", sat_seed, "RNG seed");
    sat_marg->callback([&] {
        sgc::CnfFormula f;
        if (!sat_cnf.empty()) {
            f = sgc::from_dimacs(sgc::read_file(sat_cnf));
        } else {
            sgc::Rng rng = sgc::make_rng(sat_seed);
            f = sgc::random_ksat(sat_n, sat_alpha, sat_k, rng);
        }
        bool unsat_evidence = false;
        const auto marg = sgc::generic_bp(sgc::to_factor_graph(f), sat_iters, 0.0,
                                          &unsat_evidence);
        json j;
        j["num_vars"] = f.num_vars;
        j["num_clauses"] = f.clauses.size();
        j["unsat_evidence"] = unsat_evidence;
        std::vector<double> p_true(f.num_vars);
        for (std::size_t i = 0; i < f.num_vars; ++i) p_true[i] = marg[i][1];
        j["bp_p_true"] = p_true;
        if (f.num_vars <= 24) {
            try {
                const auto exact = sgc::brute_force_marginals(f);
                j["exact_p_true"] = exact.p_true;
                j["solution_count"] = exact.solution_count;
            } catch (const std::exception& e) {
                j["exact_error"] = e.what();
            }
        }
        std::cout << j.dump(2) << "\n";
    });
    auto* sat_probe = sat_cmd->add_subcommand("probe", "tree-formula decay probe");
    std::size_t probe_t = 2, probe_trials = 200;
    sat_probe->add_option("--k", sat_k, "literals per clause");
    sat_probe->add_option("--alpha", sat_alpha, "clause density");
    sat_probe->add_option("--t", probe_t, "tree depth");
    sat_probe->add_option("--trials", probe_trials, "trees to average");
    sat_probe->add_option("--seed", sat_seed, "RNG seed");
    sat_probe->callback([&] {
        sgc::Rng rng = sgc::make_rng(sat_seed);
        double spread_sum = 0.0;
        std::size_t used = 0, oversized = 0;
        for (std::size_t i = 0; i < probe_trials; ++i) {
            const auto tree = sgc::sample_tree_formula(sat_k, sat_alpha, probe_t, rng);
            if (tree.boundary.size() > 16) {
                ++oversized;
                continue;
            }
            const auto probe = sgc::decay_probe(tree, sgc::BoundaryMethod::Exhaustive);
            spread_sum += std::min(probe.h_max, sgc::kLlrCap) -
                          std::max(probe.h_min, -sgc::kLlrCap);
            ++used;
        }
        std::printf("mean clamped root-likelihood spread %.4f over %zu trees "
                    "(%zu skipped as oversized)\n",
                    spread_sum / static_cast<double>(used), used, oversized);
    });

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo error-rate sweep");
    sgc::ExperimentConfig ecfg;
    std::string exp_decoder = "bp", exp_kind = "bsc", exp_policy = "zero";
    std::string exp_format = "csv", exp_name = "records";
    exp_cmd->add_option("--l", ecfg.var_degree, "variable degree");
    exp_cmd->add_option("--k", ecfg.chk_degree, "check degree");
    exp_cmd->add_option("--n", ecfg.block_lengths, "blocklength list")->required();
    exp_cmd->add_option("--channel", exp_kind, "bsc|bec|zc|awgn");
    exp_cmd->add_option("--p", ecfg.params, "channel parameter grid")->required();
    exp_cmd->add_option("--decoder", exp_decoder, "bp|flip");
    exp_cmd->add_option("--codeword", exp_policy, "zero|random");
    exp_cmd->add_option("--trials", ecfg.trials, "trials per point");
    exp_cmd->add_option("--max-iter", ecfg.max_iterations, "decoder iteration cap");
    exp_cmd->add_option("--stop-errors", ecfg.stop_at_block_errors,
                        "end a point after this many block errors");
    exp_cmd->add_flag("--fixed-code", ecfg.fixed_code, "one code draw per point");
    exp_cmd->add_option("--seed", ecfg.seed, "RNG seed");
    exp_cmd->add_option("--format", exp_format, "csv|json");
    exp_cmd->add_option("--name", exp_name, "output file stem");
    exp_cmd->callback([&] {
        ecfg.channel = sgc::channel_kind_from_string(exp_kind);
        ecfg.decoder = exp_decoder == "flip" ? sgc::DecoderKind::Flip
                                             : sgc::DecoderKind::Bp;
        ecfg.policy = exp_policy == "random" ? sgc::CodewordPolicy::Random
                                             : sgc::CodewordPolicy::AllZero;
        const auto records = sgc::run_experiment(ecfg);
        const bool csv = exp_format != "json";
        const std::string path =
            out_path(out_dir, exp_name + (csv ? ".csv" : ".json"));
        sgc::emit(records, path, csv ? sgc::EmitFormat::Csv : sgc::EmitFormat::Json);
        std::printf("wrote %s (%zu records)\n", path.c_str(), records.size());
    });

    // ---- scaling ----
    auto* scale_cmd = app.add_subcommand("scaling", "finite-length scaling fit");
    std::string scale_records;
    double scale_epsd = 0.084;
    bool scale_refined = false;
    scale_cmd->add_option("--records", scale_records, "CSV from `experiment`")
        ->required();
    scale_cmd->add_option("--eps-d", scale_epsd, "BP threshold input")->required();
    scale_cmd->add_flag("--refined", scale_refined, "include the n^{-2/3} shift");
    scale_cmd->callback([&] {
        std::ifstream in(scale_records);
        if (!in) throw std::runtime_error("cannot open " + scale_records);
        const auto records = sgc::records_from_csv(in);
        const auto fit = sgc::scaling_compare(records, scale_epsd, scale_refined);
        json j{{"alpha", fit.alpha},
               {"beta", fit.beta},
               {"refined", fit.refined},
               {"rms_residual", fit.rms_residual},
               {"points_used", fit.points_used},
               {"points_dropped", fit.points_dropped}};
        std::cout << j.dump(2) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
