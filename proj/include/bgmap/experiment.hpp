#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bgmap/map_estimator.hpp"
#include "bgmap/theory_bounds.hpp"

namespace bgmap {

/// One Monte Carlo campaign: model, bound parameters, trial count, seed,
/// solver choice, cardinality constraint factor Q, and the restricted-isometry
/// estimation mode used by the inspection subcommands.
struct ExperimentConfig {
    ModelParams params;
    BoundParams bounds;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    SolverKind solver = SolverKind::Exhaustive;
    double cardinality_q = 2.0;
    RipMode rip_mode = RipMode::Exhaustive;
    std::size_t rip_samples = 0;

    std::size_t cardinality_cap() const { return default_cardinality_cap(params, cardinality_q); }
    void validate() const;
};

struct TrialRecord {
    std::uint64_t trial_id = 0;
    std::uint64_t seed = 0;
    std::size_t true_support_size = 0;
    std::size_t est_support_size = 0;
    std::size_t missed_count = 0;
    std::size_t false_count = 0;
    double missed_energy = 0.0;
    double theorem1_energy_bound = 0.0;
    bool bound_satisfied = false;
    bool event_e = false;
    double cost_true = 0.0;
    double cost_est = 0.0;
    SolverKind solver = SolverKind::Exhaustive;
};

/// Campaign summary. The conditioned fractions follow the theorems (restricted
/// to trials where event E holds and the true support fits the cap); the
/// unconditioned variants count over all successful trials.
struct Aggregate {
    std::size_t trials_run = 0;
    std::size_t failed_trials = 0;
    std::size_t eligible_trials = 0;
    double frac_bound_satisfied = 0.0;
    double frac_bound_satisfied_unconditioned = 0.0;
    double frac_event_e = 0.0;
    double frac_no_miss = 0.0;
    double frac_no_miss_unconditioned = 0.0;
    double frac_perfect = 0.0;
    double frac_perfect_unconditioned = 0.0;
    double mean_missed_energy = 0.0;
    double theorem1_prob_lower = 0.0;
    double theorem1_prob_lower_unclamped = 0.0;
    bool theorem1_vacuous = false;
    double theorem2_prob_no_miss = 0.0;
    double theorem2_prob_perfect = 0.0;
    double theorem2_prob_unclamped = 0.0;
    bool theorem2_vacuous = false;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;
    std::vector<std::uint64_t> failed_trial_ids;
    Aggregate aggregate;
};

/// Per-trial seed, derived from (master_seed, trial_id) only.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id);

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial_id);

/// Runs all trials (optionally across threads) and aggregates. The output is
/// a pure function of the config; thread count never changes it.
ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

std::string to_json_line(const TrialRecord& record);
std::string aggregate_json(const Aggregate& aggregate);

void emit_records(const std::vector<TrialRecord>& records, const std::string& path);
void emit_aggregate(const Aggregate& aggregate, const std::string& path);

/// CSV with header `beta,k1,prob_lower`, 12 significant digits.
void write_fig1_csv(const std::vector<Fig1Row>& rows, std::ostream& out);
void emit_fig1_csv(const std::vector<Fig1Row>& rows, const std::string& path);

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

const char* solver_name(SolverKind kind);
const char* rip_mode_name(RipMode mode);

} // namespace bgmap
