#include "bgmap/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bgmap/recovery_metrics.hpp"

namespace bgmap {

using nlohmann::json;

void ExperimentConfig::validate() const {
    params.validate();
    if (trials < 1) throw ValidationError("ExperimentConfig: trials must be >= 1");
    if (!(cardinality_q > 1.0)) throw ValidationError("ExperimentConfig: cardinality_q must exceed 1");
    if (!(bounds.beta > 1.0) || !(bounds.beta_bar > 1.0)) {
        throw ValidationError("ExperimentConfig: beta and beta_bar must exceed 1");
    }
    if (rip_mode == RipMode::Sampled && rip_samples == 0) {
        throw ValidationError("ExperimentConfig: sampled rip_mode needs rip_samples > 0");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_id) {
    return derive_stream_seed(master_seed, "trial", trial_id);
}

TrialRecord run_trial(const ExperimentConfig& config, std::uint64_t trial_id) {
    config.validate();
    const std::uint64_t seed = trial_seed(config.master_seed, trial_id);
    const Instance inst = generate_instance(config.params, seed);
    const std::size_t cap = config.cardinality_cap();

    const SupportEstimate est = config.solver == SolverKind::Exhaustive
                                    ? exhaustive_map(inst, cap)
                                    : greedy_map(inst, cap);

    const SupportPartition part =
        partition_supports(inst.signal.support, est.support, config.params.N);

    TrialRecord rec;
    rec.trial_id = trial_id;
    rec.seed = seed;
    rec.true_support_size = inst.signal.support.size();
    rec.est_support_size = est.support.size();
    rec.missed_count = part.missed.size();
    rec.false_count = part.false_alarms.size();
    rec.missed_energy = missed_energy(inst.signal, part);
    // p = 0 forces an empty support and the bound degenerates to its limit 0.
    rec.theorem1_energy_bound =
        config.params.p > 0.0 ? theorem1(config.params, config.bounds).energy_bound : 0.0;
    rec.bound_satisfied = rec.missed_energy <= rec.theorem1_energy_bound;
    rec.event_e = static_cast<double>(rec.true_support_size) <=
                  2.0 * static_cast<double>(config.params.N) * config.params.p;
    rec.cost_true = gamma_cost(inst.signal.support, inst).total;
    rec.cost_est = est.cost.total;
    rec.solver = config.solver;
    return rec;
}

namespace {

Aggregate aggregate_records(const ExperimentConfig& config,
                            const std::vector<TrialRecord>& records, std::size_t failed) {
    Aggregate agg;
    agg.trials_run = records.size();
    agg.failed_trials = failed;

    const std::size_t cap = config.cardinality_cap();
    std::size_t n_eligible = 0, n_bound = 0, n_bound_all = 0, n_event = 0;
    std::size_t n_no_miss = 0, n_no_miss_all = 0, n_perfect = 0, n_perfect_all = 0;
    double energy_sum = 0.0;

    for (const TrialRecord& r : records) {
        const bool eligible = r.event_e && r.true_support_size <= cap;
        const bool no_miss = r.missed_count == 0;
        const bool perfect = no_miss && r.false_count == 0;
        if (eligible) {
            ++n_eligible;
            if (r.bound_satisfied) ++n_bound;
            if (no_miss) ++n_no_miss;
            if (perfect) ++n_perfect;
        }
        if (r.bound_satisfied) ++n_bound_all;
        if (r.event_e) ++n_event;
        if (no_miss) ++n_no_miss_all;
        if (perfect) ++n_perfect_all;
        energy_sum += r.missed_energy;
    }

    const double total = static_cast<double>(records.size());
    const double eligible_total = static_cast<double>(n_eligible);
    agg.eligible_trials = n_eligible;
    if (n_eligible > 0) {
        agg.frac_bound_satisfied = static_cast<double>(n_bound) / eligible_total;
        agg.frac_no_miss = static_cast<double>(n_no_miss) / eligible_total;
        agg.frac_perfect = static_cast<double>(n_perfect) / eligible_total;
    }
    if (!records.empty()) {
        agg.frac_bound_satisfied_unconditioned = static_cast<double>(n_bound_all) / total;
        agg.frac_event_e = static_cast<double>(n_event) / total;
        agg.frac_no_miss_unconditioned = static_cast<double>(n_no_miss_all) / total;
        agg.frac_perfect_unconditioned = static_cast<double>(n_perfect_all) / total;
        agg.mean_missed_energy = energy_sum / total;
    }

    if (config.params.p > 0.0) {
        const Theorem1Result t1 = theorem1(config.params, config.bounds);
        agg.theorem1_prob_lower = t1.prob_lower;
        agg.theorem1_prob_lower_unclamped = t1.prob_lower_unclamped;
        agg.theorem1_vacuous = t1.vacuous;
        const Theorem2Result t2 = theorem2(config.params, config.bounds);
        agg.theorem2_prob_no_miss = t2.prob_no_miss;
        agg.theorem2_prob_perfect = t2.prob_perfect;
        agg.theorem2_prob_unclamped = t2.prob_unclamped;
        agg.theorem2_vacuous = t2.vacuous;
    } else {
        agg.theorem1_vacuous = true;
        agg.theorem2_vacuous = true;
    }
    return agg;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    if (threads == 0) threads = 1;

    struct Slot {
        bool ok = false;
        bool failed = false;
        TrialRecord record;
    };
    std::vector<Slot> slots(config.trials);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            try {
                slots[t].record = run_trial(config, t);
                slots[t].ok = true;
            } catch (const std::exception&) {
                slots[t].failed = true;
            }
        }
    };

    if (threads == 1 || config.trials < 2) {
        worker(0, config.trials);
    } else {
        const std::size_t n_workers = std::min<std::size_t>(threads, config.trials);
        std::vector<std::thread> pool;
        const std::size_t chunk = (config.trials + n_workers - 1) / n_workers;
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(config.trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ExperimentResult result;
    for (std::size_t t = 0; t < config.trials; ++t) {
        if (slots[t].ok) {
            result.records.push_back(slots[t].record);
        } else {
            result.failed_trial_ids.push_back(t);
        }
    }
    result.aggregate = aggregate_records(config, result.records, result.failed_trial_ids.size());
    return result;
}

std::string to_json_line(const TrialRecord& r) {
    json j;
    j["trial_id"] = r.trial_id;
    j["seed"] = r.seed;
    j["true_support_size"] = r.true_support_size;
    j["est_support_size"] = r.est_support_size;
    j["missed_count"] = r.missed_count;
    j["false_count"] = r.false_count;
    j["missed_energy"] = r.missed_energy;
    j["theorem1_energy_bound"] = r.theorem1_energy_bound;
    j["bound_satisfied"] = r.bound_satisfied;
    j["event_e"] = r.event_e;
    j["cost_true"] = r.cost_true;
    j["cost_est"] = r.cost_est;
    j["solver"] = solver_name(r.solver);
    return j.dump();
}

std::string aggregate_json(const Aggregate& a) {
    json j;
    j["trials_run"] = a.trials_run;
    j["failed_trials"] = a.failed_trials;
    j["eligible_trials"] = a.eligible_trials;
    j["frac_bound_satisfied"] = a.frac_bound_satisfied;
    j["frac_bound_satisfied_unconditioned"] = a.frac_bound_satisfied_unconditioned;
    j["frac_event_e"] = a.frac_event_e;
    j["frac_no_miss"] = a.frac_no_miss;
    j["frac_no_miss_unconditioned"] = a.frac_no_miss_unconditioned;
    j["frac_perfect"] = a.frac_perfect;
    j["frac_perfect_unconditioned"] = a.frac_perfect_unconditioned;
    j["mean_missed_energy"] = a.mean_missed_energy;
    j["theorem1_prob_lower"] = a.theorem1_prob_lower;
    j["theorem1_prob_lower_unclamped"] = a.theorem1_prob_lower_unclamped;
    j["theorem1_vacuous"] = a.theorem1_vacuous;
    j["theorem2_prob_bounds"] = {{"prob_no_miss", a.theorem2_prob_no_miss},
                                 {"prob_perfect", a.theorem2_prob_perfect},
                                 {"prob_unclamped", a.theorem2_prob_unclamped},
                                 {"vacuous", a.theorem2_vacuous}};
    return j.dump(2);
}

namespace {

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    return out;
}

} // namespace

void emit_records(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out = open_for_write(path);
    for (const TrialRecord& r : records) out << to_json_line(r) << '\n';
    if (!out) throw NumericalError("write failed: " + path);
}

void emit_aggregate(const Aggregate& aggregate, const std::string& path) {
    std::ofstream out = open_for_write(path);
    out << aggregate_json(aggregate) << '\n';
    if (!out) throw NumericalError("write failed: " + path);
}

void write_fig1_csv(const std::vector<Fig1Row>& rows, std::ostream& out) {
    out << "beta,k1,prob_lower\n";
    char buf[128];
    for (const Fig1Row& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", row.beta, row.k1, row.prob_lower);
        out << buf;
    }
}

void emit_fig1_csv(const std::vector<Fig1Row>& rows, const std::string& path) {
    std::ofstream out = open_for_write(path);
    write_fig1_csv(rows, out);
    if (!out) throw NumericalError("write failed: " + path);
}

const char* solver_name(SolverKind kind) {
    return kind == SolverKind::Exhaustive ? "exhaustive" : "greedy";
}

const char* rip_mode_name(RipMode mode) {
    return mode == RipMode::Exhaustive ? "exhaustive" : "sampled";
}

namespace {

SolverKind solver_from_name(const std::string& name) {
    if (name == "exhaustive") return SolverKind::Exhaustive;
    if (name == "greedy") return SolverKind::Greedy;
    throw ValidationError("unknown solver '" + name + "' (expected exhaustive or greedy)");
}

RipMode rip_mode_from_name(const std::string& name) {
    if (name == "exhaustive") return RipMode::Exhaustive;
    if (name == "sampled") return RipMode::Sampled;
    throw ValidationError("unknown rip_mode '" + name + "' (expected exhaustive or sampled)");
}

} // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }

    ExperimentConfig config;
    try {
        const json& p = j.at("params");
        config.params.N = p.at("N").get<std::size_t>();
        config.params.M = p.at("M").get<std::size_t>();
        config.params.p = p.at("p").get<double>();
        config.params.mu1 = p.at("mu1").get<double>();
        config.params.sigma1 = p.at("sigma1").get<double>();
        config.params.sigma_e = p.at("sigma_e").get<double>();

        const json& b = j.at("bounds");
        config.bounds.beta = b.at("beta").get<double>();
        config.bounds.beta_bar = b.at("beta_bar").get<double>();

        config.trials = j.at("trials").get<std::size_t>();
        config.master_seed = j.at("master_seed").get<std::uint64_t>();
        config.solver = solver_from_name(j.value("solver", "exhaustive"));
        config.cardinality_q = j.value("cardinality_q", 2.0);
        config.rip_mode = rip_mode_from_name(j.value("rip_mode", "exhaustive"));
        config.rip_samples = j.value("rip_samples", std::size_t{0});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config field error: ") + e.what());
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

} // namespace bgmap
