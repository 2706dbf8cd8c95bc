// Command-line front end: closed-form bound constants, Figure-style sweeps,
// Monte Carlo campaigns, restricted-isometry estimation, and the
// near-orthogonality checks, all driven by one JSON config file.
//
// Exit codes: 0 success, 2 config/validation error, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgmap/experiment.hpp"
#include "bgmap/recovery_metrics.hpp"

using nlohmann::json;

namespace {

json theorem1_json(const bgmap::Theorem1Result& t1) {
    return json{{"C", t1.C},
                {"K1", t1.K1},
                {"energy_bound", t1.energy_bound},
                {"norm_bound", t1.norm_bound},
                {"prob_lower", t1.prob_lower},
                {"prob_lower_unclamped", t1.prob_lower_unclamped},
                {"vacuous", t1.vacuous}};
}

json theorem2_json(const bgmap::Theorem2Result& t2) {
    return json{{"K1", t2.K1},
                {"K2", t2.K2},
                {"K3", t2.K3},
                {"K4", t2.K4},
                {"mu_threshold_no_miss", t2.mu_threshold_no_miss},
                {"mu_threshold_perfect", t2.mu_threshold_perfect},
                {"prob_no_miss", t2.prob_no_miss},
                {"prob_perfect", t2.prob_perfect},
                {"prob_unclamped", t2.prob_unclamped},
                {"vacuous", t2.vacuous}};
}

std::vector<double> linspace(double lo, double hi, std::size_t steps) {
    std::vector<double> grid;
    if (steps == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (std::size_t i = 0; i < steps; ++i) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return grid;
}

int run(int argc, char** argv) {
    CLI::App app{"Bernoulli-Gaussian MAP support recovery: bounds, sweeps, simulations"};
    app.require_subcommand(1);

    std::string config_path;

    auto* constants = app.add_subcommand("constants", "Print bound constants and probabilities");
    double beta = 0.0, beta_bar = 0.0;
    constants->add_option("--config", config_path, "Config JSON")->required();
    constants->add_option("--beta", beta, "Slack parameter beta > 1")->required();
    constants->add_option("--beta-bar", beta_bar, "Slack parameter beta_bar > 1");

    auto* fig1 = app.add_subcommand("fig1", "Sweep K1 and the probability bound over beta");
    double beta_min = 0.0, beta_max = 0.0;
    std::size_t steps = 0;
    std::string out_csv;
    fig1->add_option("--config", config_path, "Config JSON")->required();
    fig1->add_option("--beta-min", beta_min)->required();
    fig1->add_option("--beta-max", beta_max)->required();
    fig1->add_option("--steps", steps, "Number of grid points")->required();
    fig1->add_option("--out", out_csv, "Output CSV path")->required();

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo campaign");
    std::string out_jsonl, out_aggregate;
    unsigned threads = 1;
    simulate->add_option("--config", config_path, "Config JSON")->required();
    simulate->add_option("--out", out_jsonl, "Trial records, JSON lines")->required();
    simulate->add_option("--aggregate", out_aggregate, "Aggregate JSON path");
    simulate->add_option("--threads", threads, "Worker threads (output is identical for any count)");

    auto* verify_rip = app.add_subcommand("verify-rip", "Estimate the RIP constant of a drawn matrix");
    std::size_t level = 0, samples = 0;
    verify_rip->add_option("--config", config_path, "Config JSON")->required();
    verify_rip->add_option("--level", level, "Sparsity level k")->required();
    verify_rip->add_option("--samples", samples, "Random supports (switches to sampled mode)");

    auto* check_props = app.add_subcommand("check-propositions",
                                           "Run the near-orthogonality checks on a fresh instance");
    std::uint64_t prop_seed = 0;
    std::size_t size_i = 2, size_j = 2;
    check_props->add_option("--config", config_path, "Config JSON")->required();
    check_props->add_option("--seed", prop_seed, "Instance seed")->required();
    check_props->add_option("--size-i", size_i, "Cardinality of S_i");
    check_props->add_option("--size-j", size_j, "Cardinality of S_j");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // bad flags are validation errors
    }

    const bgmap::ExperimentConfig config = bgmap::load_config(config_path);

    if (constants->parsed()) {
        bgmap::BoundParams bp = config.bounds;
        bp.beta = beta;
        json out;
        out["params"] = {{"N", config.params.N},       {"M", config.params.M},
                         {"p", config.params.p},       {"mu1", config.params.mu1},
                         {"sigma1", config.params.sigma1}, {"sigma_e", config.params.sigma_e}};
        out["C"] = bgmap::constant_C(config.params);
        out["theorem1"] = theorem1_json(bgmap::theorem1(config.params, bp));
        if (beta_bar > 0.0) {
            bp.beta_bar = beta_bar;
            out["theorem2"] = theorem2_json(bgmap::theorem2(config.params, bp));
        }
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    if (fig1->parsed()) {
        if (!(beta_min > 1.0) || !(beta_max >= beta_min) || steps == 0) {
            throw bgmap::ValidationError("fig1: requires 1 < beta-min <= beta-max and steps >= 1");
        }
        const auto rows = bgmap::fig1_sweep(config.params, linspace(beta_min, beta_max, steps));
        bgmap::emit_fig1_csv(rows, out_csv);
        std::cerr << "wrote " << rows.size() << " rows to " << out_csv << '\n';
        return 0;
    }

    if (simulate->parsed()) {
        const bgmap::ExperimentResult result = bgmap::run_experiment(config, threads);
        bgmap::emit_records(result.records, out_jsonl);
        if (!out_aggregate.empty()) bgmap::emit_aggregate(result.aggregate, out_aggregate);
        std::cout << bgmap::aggregate_json(result.aggregate) << '\n';
        if (!result.failed_trial_ids.empty()) {
            std::cerr << result.failed_trial_ids.size() << " trial(s) failed and were excluded\n";
        }
        return 0;
    }

    if (verify_rip->parsed()) {
        bgmap::Rng matrix_rng(bgmap::derive_stream_seed(config.master_seed, "matrix"));
        const bgmap::DenseMatrix a = bgmap::draw_matrix(config.params, matrix_rng);
        bgmap::Rng rng(bgmap::derive_stream_seed(config.master_seed, "rip"));
        const bgmap::RipMode mode = samples > 0 ? bgmap::RipMode::Sampled : config.rip_mode;
        const std::size_t n_samples = samples > 0 ? samples : config.rip_samples;
        const bgmap::RipEstimate est = bgmap::estimate_rip(a, level, mode, n_samples, rng);
        json out{{"sparsity_level", est.sparsity_level},
                 {"epsilon_hat", est.epsilon_hat},
                 {"exhaustive", est.exhaustive},
                 {"supports_checked", est.supports_checked}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    if (check_props->parsed()) {
        const bgmap::Instance inst = bgmap::generate_instance(config.params, prop_seed);
        if (size_i + size_j > config.params.N) {
            throw bgmap::ValidationError("check-propositions: size-i + size-j exceeds N");
        }

        // Disjoint supports drawn from a dedicated labeled stream of the seed.
        bgmap::Rng pick(bgmap::derive_stream_seed(prop_seed, "propcheck"));
        std::vector<int> deck(config.params.N);
        for (std::size_t i = 0; i < deck.size(); ++i) deck[i] = static_cast<int>(i);
        for (std::size_t i = 0; i < size_i + size_j; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(pick.below(deck.size() - i));
            std::swap(deck[i], deck[j]);
        }
        std::vector<int> s_i(deck.begin(), deck.begin() + static_cast<std::ptrdiff_t>(size_i));
        std::vector<int> s_j(deck.begin() + static_cast<std::ptrdiff_t>(size_i),
                             deck.begin() + static_cast<std::ptrdiff_t>(size_i + size_j));
        std::sort(s_i.begin(), s_i.end());
        std::sort(s_j.begin(), s_j.end());

        const std::size_t rip_level = size_i + size_j;
        bgmap::Rng rip_rng(bgmap::derive_stream_seed(prop_seed, "ripcheck"));
        const bgmap::RipEstimate rip =
            bgmap::estimate_rip(inst.matrix, rip_level, config.rip_mode, config.rip_samples, rip_rng);

        const bgmap::PropositionReport report =
            bgmap::check_propositions(inst.matrix, s_i, s_j, config.params, rip.epsilon_hat);

        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"name", c.name},
                              {"measured", c.measured},
                              {"bound", c.bound},
                              {"lower_bound", c.lower_bound},
                              {"passed", c.passed},
                              {"vacuous", c.vacuous},
                              {"trivial", c.trivial}});
        }
        json out{{"epsilon", report.epsilon},
                 {"rip_exhaustive", rip.exhaustive},
                 {"support_i", report.support_i},
                 {"support_j", report.support_j},
                 {"checks", checks},
                 {"all_passed", report.all_passed}};
        std::cout << out.dump(2) << '\n';
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bgmap::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bgmap::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
