#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonlocalbox/box.hpp"
#include "nonlocalbox/criteria.hpp"
#include "nonlocalbox/errors.hpp"
#include "nonlocalbox/io.hpp"
#include "nonlocalbox/macro_sim.hpp"
#include "nonlocalbox/optimizer.hpp"

namespace {

using nlohmann::json;
using namespace nlb;

// Exit contract: 0 success, 1 operational error (I/O, parsing,
// infeasible target, undefined statistic), 2 validation failure
// (positivity / normalization / no-signaling).
int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const PositivityViolation& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const NormalizationViolation& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const NoSignalingViolation& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (...) {
        std::fprintf(stderr, "error: unknown failure\n");
        return 1;
    }
}

json criterion_or_error(const std::function<CriterionReport()>& fn) {
    try {
        return to_json(fn());
    } catch (const Error& e) {
        return json{{"error", e.what()}};
    }
}

void print_report_line(const CriterionReport& r) {
    std::string lhs;
    for (std::size_t i = 0; i < r.lhs.size(); ++i)
        lhs += (i ? ", " : "") + std::to_string(r.lhs[i]);
    std::printf("%-24s %s   lhs [%s]  bound %.9g  margin %.3e\n", r.label.c_str(),
                r.satisfied ? "satisfied" : "VIOLATED ", lhs.c_str(), r.bound,
                r.margin);
}

int cmd_eval(const std::string& box_file, double tolerance, bool as_json) {
    LoadedBox loaded = load_box(box_file, tolerance);
    const CorrelationBox& box = loaded.box;

    std::array<Marginal, 2> ma{marginal(box, Party::alice, 0),
                               marginal(box, Party::alice, 1)};
    std::array<Marginal, 2> mb{marginal(box, Party::bob, 0),
                               marginal(box, Party::bob, 1)};
    double chsh = chsh_value(box);

    if (as_json) {
        json j{{"file", box_file},
               {"format", to_string(loaded.format)},
               {"valid", true},
               {"chsh", chsh},
               {"box", box_to_json(box)}};
        for (int s = 0; s < 2; ++s) {
            json a{{"p0", ma[s].p0},
                   {"p1", ma[s].p1},
                   {"discrepancy", ma[s].discrepancy},
                   {"biasness_percent", biasness_percent(box, Party::alice, s)}};
            json b{{"p0", mb[s].p0},
                   {"p1", mb[s].p1},
                   {"discrepancy", mb[s].discrepancy},
                   {"biasness_percent", biasness_percent(box, Party::bob, s)}};
            j["marginals"]["alice"].push_back(a);
            j["marginals"]["bob"].push_back(b);
        }
        j["reports"] = json{
            {"no_signaling",
             criterion_or_error([&] { return check_no_signaling(box); })},
            {"ic", criterion_or_error([&] { return ic_check(box); })},
            {"ml", criterion_or_error([&] { return ml_check(box); })}};
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }

    std::printf("box file: %s (%s format)\n\n%s\n", box_file.c_str(),
                to_string(loaded.format), box_table(box).c_str());
    std::printf("observable   P(0)        biasness\n");
    for (int s = 0; s < 2; ++s)
        std::printf("  alice %d    %.6f    %.4f%%\n", s, ma[s].p0,
                    biasness_percent(box, Party::alice, s));
    for (int s = 0; s < 2; ++s)
        std::printf("  bob %d      %.6f    %.4f%%\n", s, mb[s].p0,
                    biasness_percent(box, Party::bob, s));
    std::printf("\nCHSH value |<00>+<01>+<10>-<11>| = %.6f\n\n", chsh);

    for (auto& fn : {std::function<CriterionReport()>(
                         [&] { return check_no_signaling(box); }),
                     std::function<CriterionReport()>(
                         [&] { return ic_check(box); }),
                     std::function<CriterionReport()>(
                         [&] { return ml_check(box); })}) {
        try {
            print_report_line(fn());
        } catch (const Error& e) {
            std::printf("criterion undefined for this box: %s\n", e.what());
        }
    }
    return 0;
}

int cmd_maximize(const std::string& criterion, double chsh_target,
                 std::uint64_t seed, const std::string& out_path) {
    OptimizerOptions opts;
    opts.chsh_target = chsh_target;
    opts.seed = seed;
    CriterionKind kind = criterion == "ns"   ? CriterionKind::ns
                         : criterion == "ic" ? CriterionKind::ic
                                             : CriterionKind::ml;
    BiasMaxResult res = max_equal_bias(kind, opts);

    std::printf("criterion      : %s\n", criterion.c_str());
    std::printf("CHSH target    : %.9f\n", res.chsh_target);
    std::printf("p_star         : %.9f\n", res.p_star);
    std::printf("bias           : %.4f%%\n", res.bias_percent);
    std::printf("CHSH at optimum: %.9f\n", res.chsh_value);
    std::printf("method         : %s\n", res.method.c_str());
    std::printf("distance to quantum box: max_abs %.3e, tv %.3e\n",
                res.distance_to_quantum.max_abs,
                res.distance_to_quantum.total_variation);
    std::printf("\nextremal box\n%s",
                box_table(box_from_equal_bias(*res.extremal_box)).c_str());
    print_report_line(res.report);

    if (!out_path.empty())
        write_json_file(to_json(res), out_path);
    return 0;
}

int cmd_reproduce(const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create directory " + out_dir + ": " +
                      ec.message());
    auto path = [&](const char* name) {
        return (fs::path(out_dir) / name).string();
    };

    CorrelationBox quantum = quantum_tsirelson_box();
    EqualBiasBox quantum_eb{0.5, {quantum(0, 0, 0, 0), quantum(0, 1, 0, 0),
                                  quantum(1, 0, 0, 0), quantum(1, 1, 0, 0)}};
    write_box_csv(quantum, path("table1.csv"));
    write_json_file(box_to_json(quantum_eb), path("table1.json"));

    BiasMaxResult ns = max_equal_bias(CriterionKind::ns);
    BiasMaxResult ic = max_equal_bias(CriterionKind::ic);
    BiasMaxResult ml = max_equal_bias(CriterionKind::ml);

    write_box_csv(box_from_equal_bias(*ic.extremal_box), path("table3.csv"));
    write_json_file(box_to_json(*ic.extremal_box), path("table3.json"));
    write_box_csv(box_from_equal_bias(*ml.extremal_box), path("table4.csv"));
    write_json_file(box_to_json(*ml.extremal_box), path("table4.json"));

    // The equal-bias IC feasible set at the optimum pinches to a single
    // box; flag the emitted table if the search returned anything else.
    EqualBiasBox pinch;
    pinch.p = ic.p_star;
    pinch.c = {0.5, ic.p_star, ic.p_star, 2.0 * ic.p_star - 1.0};
    double dev = 0;
    const auto& got = box_from_equal_bias(*ic.extremal_box).flat();
    const auto& ref = box_from_equal_bias(pinch, 1e-4).flat();
    for (std::size_t i = 0; i < got.size(); ++i)
        dev = std::max(dev, std::abs(got[i] - ref[i]));
    bool alternative = dev > 1e-3;

    json summary{{"p_ns", ns.p_star},
                 {"p_ic", ic.p_star},
                 {"p_ml", ml.p_star},
                 {"bias_ns", ns.bias_percent},
                 {"bias_ic", ic.bias_percent},
                 {"bias_ml", ml.bias_percent},
                 {"ml_max_abs_distance", ml.distance_to_quantum.max_abs},
                 {"table3_alternative_maximizer", alternative}};
    write_json_file(summary, path("summary.json"));

    std::printf("wrote table1/table3/table4 (.csv, .json) and summary.json "
                "to %s\n",
                out_dir.c_str());
    std::printf("p_ns %.6f  p_ic %.6f  p_ml %.6f\n", ns.p_star, ic.p_star,
                ml.p_star);
    std::printf("bias_ns %.4f%%  bias_ic %.4f%%  bias_ml %.4f%%\n",
                ns.bias_percent, ic.bias_percent, ml.bias_percent);
    std::printf("ml extremal vs quantum: max_abs %.3e%s\n",
                ml.distance_to_quantum.max_abs,
                alternative ? "  (alternative ic maximizer)" : "");
    return 0;
}

int cmd_simulate(const std::string& box_file, std::int64_t pairs,
                 std::int64_t runs, std::uint64_t seed,
                 const std::string& samples_path,
                 const std::string& out_path) {
    LoadedBox loaded = load_box(box_file);
    MacroConfig cfg;
    cfg.pairs_per_run = pairs;
    cfg.runs = runs;
    cfg.seed = seed;

    MacroResult res = simulate_macroscopic(loaded.box, cfg);
    double limit = theoretical_sign_chsh(loaded.box);

    std::printf("macroscopic runs: N=%lld pairs per run, R=%lld runs per "
                "setting, seed %llu\n\n",
                static_cast<long long>(pairs), static_cast<long long>(runs),
                static_cast<unsigned long long>(seed));
    std::printf("  xy   d_hat       sign_corr   stderr\n");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            std::printf("  %d%d   %9.6f   %9.6f   %.6f\n", x, y,
                        res.d_hat[x][y], res.sign_corr[x][y],
                        res.sign_stderr[x][y]);
    std::printf("\nsign CHSH            = %.6f +/- %.6f\n", res.sign_chsh,
                res.stderr_sign_chsh);
    std::printf("large-N theoretical  = %.6f\n", limit);

    if (!samples_path.empty())
        write_run_samples_csv(loaded.box, cfg, samples_path);
    if (!out_path.empty()) {
        json j = to_json(res);
        j["theoretical_sign_chsh"] = limit;
        write_json_file(j, out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bipartite no-signaling box toolkit: CHSH evaluation, "
                 "information-causality and macroscopic-locality checks, "
                 "bias maximization, and coarse-grained Monte Carlo"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand(
        "eval", "Validate a box file and evaluate all criteria");
    std::string eval_file;
    double eval_tol = kDefaultTolerance;
    bool eval_json = false;
    eval->add_option("box_file", eval_file, "Box JSON file")->required();
    eval->add_option("--tolerance", eval_tol,
                     "Validation tolerance (default 1e-9)");
    eval->add_flag("--json", eval_json, "Emit a JSON document instead of text");

    auto* maximize = app.add_subcommand(
        "maximize", "Maximize equal observable bias at a CHSH value");
    std::string max_criterion;
    double max_target = 2.8284271247461903;
    std::uint64_t max_seed = 0;
    std::string max_out;
    maximize->add_option("--criterion", max_criterion, "ns, ic or ml")
        ->required()
        ->check(CLI::IsMember({"ns", "ic", "ml"}));
    maximize->add_option("--chsh-target", max_target,
                         "Pinned CHSH value (default 2*sqrt(2))");
    maximize->add_option("--seed", max_seed, "Recorded in the result");
    maximize->add_option("--out", max_out, "Write the result JSON here");

    auto* reproduce = app.add_subcommand(
        "reproduce", "Emit the reference tables and optima summary");
    std::string rep_out;
    reproduce->add_option("--out", rep_out, "Output directory")->required();

    auto* simulate = app.add_subcommand(
        "simulate", "Coarse-grained Monte Carlo Bell experiment");
    std::string sim_file, sim_samples, sim_out;
    std::int64_t sim_pairs = 10000, sim_runs = 10000;
    std::uint64_t sim_seed = 0;
    simulate->add_option("box_file", sim_file, "Box JSON file")->required();
    simulate->add_option("--pairs", sim_pairs, "Pairs per run (default 1e4)");
    simulate->add_option("--runs", sim_runs,
                         "Runs per setting pair (default 1e4)");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--emit-samples", sim_samples,
                         "Write per-run fluctuations CSV here");
    simulate->add_option("--out", sim_out, "Write the result JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 1;
    }

    if (eval->parsed())
        return run_guarded([&] { return cmd_eval(eval_file, eval_tol, eval_json); });
    if (maximize->parsed())
        return run_guarded(
            [&] { return cmd_maximize(max_criterion, max_target, max_seed, max_out); });
    if (reproduce->parsed())
        return run_guarded([&] { return cmd_reproduce(rep_out); });
    if (simulate->parsed())
        return run_guarded([&] {
            return cmd_simulate(sim_file, sim_pairs, sim_runs, sim_seed,
                                sim_samples, sim_out);
        });
    return 1;
}
