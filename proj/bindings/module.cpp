#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bgmap/experiment.hpp"
#include "bgmap/recovery_metrics.hpp"

namespace py = pybind11;
using namespace bgmap;

namespace {

DenseMatrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw ValidationError("expected a 2-D array");
    const auto rows = static_cast<std::size_t>(arr.shape(0));
    const auto cols = static_cast<std::size_t>(arr.shape(1));
    DenseMatrix m(rows, cols);
    std::copy(arr.data(), arr.data() + rows * cols, m.data().begin());
    return m;
}

py::array_t<double> matrix_to_numpy(const DenseMatrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), arr.mutable_data());
    return arr;
}

RipMode rip_mode_from_string(const std::string& name) {
    if (name == "exhaustive") return RipMode::Exhaustive;
    if (name == "sampled") return RipMode::Sampled;
    throw ValidationError("rip mode must be 'exhaustive' or 'sampled'");
}

SolverKind solver_from_string(const std::string& name) {
    if (name == "exhaustive") return SolverKind::Exhaustive;
    if (name == "greedy") return SolverKind::Greedy;
    throw ValidationError("solver must be 'exhaustive' or 'greedy'");
}

} // namespace

PYBIND11_MODULE(_bgmap, m) {
    m.doc() = "Constrained MAP support recovery for Bernoulli-Gaussian signals:"
              " estimators, bound constants, and Monte Carlo validation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<DenseMatrix>(m, "DenseMatrix")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
                 return matrix_from_numpy(a);
             }),
             py::arg("array"))
        .def_property_readonly("rows", &DenseMatrix::rows)
        .def_property_readonly("cols", &DenseMatrix::cols)
        .def("to_numpy", &matrix_to_numpy);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](std::size_t N, std::size_t M, double p, double mu1, double sigma1,
                         double sigma_e) {
                 ModelParams mp{N, M, p, mu1, sigma1, sigma_e};
                 mp.validate();
                 return mp;
             }),
             py::arg("N"), py::arg("M"), py::arg("p"), py::arg("mu1"), py::arg("sigma1"),
             py::arg("sigma_e"))
        .def_readonly("N", &ModelParams::N)
        .def_readonly("M", &ModelParams::M)
        .def_readonly("p", &ModelParams::p)
        .def_readonly("mu1", &ModelParams::mu1)
        .def_readonly("sigma1", &ModelParams::sigma1)
        .def_readonly("sigma_e", &ModelParams::sigma_e);

    py::class_<BoundParams>(m, "BoundParams")
        .def(py::init<double, double>(), py::arg("beta"), py::arg("beta_bar") = 16.0)
        .def_readonly("beta", &BoundParams::beta)
        .def_readonly("beta_bar", &BoundParams::beta_bar);

    py::class_<SparseSignal>(m, "SparseSignal")
        .def_readonly("support", &SparseSignal::support)
        .def_readonly("values", &SparseSignal::values);

    py::class_<Instance>(m, "Instance")
        .def_readonly("params", &Instance::params)
        .def_property_readonly("matrix", [](const Instance& i) { return matrix_to_numpy(i.matrix); })
        .def_readonly("signal", &Instance::signal)
        .def_readonly("noise", &Instance::noise)
        .def_readonly("observation", &Instance::observation);

    py::class_<RipEstimate>(m, "RipEstimate")
        .def_readonly("sparsity_level", &RipEstimate::sparsity_level)
        .def_readonly("epsilon_hat", &RipEstimate::epsilon_hat)
        .def_readonly("exhaustive", &RipEstimate::exhaustive)
        .def_readonly("supports_checked", &RipEstimate::supports_checked);

    py::class_<GammaBreakdown>(m, "GammaBreakdown")
        .def_readonly("gamma1", &GammaBreakdown::gamma1)
        .def_readonly("gamma2", &GammaBreakdown::gamma2)
        .def_readonly("gamma3", &GammaBreakdown::gamma3)
        .def_readonly("total", &GammaBreakdown::total);

    py::class_<SupportEstimate>(m, "SupportEstimate")
        .def_readonly("support", &SupportEstimate::support)
        .def_readonly("cost", &SupportEstimate::cost)
        .def_property_readonly("solver",
                               [](const SupportEstimate& e) { return solver_name(e.solver); })
        .def_readonly("supports_evaluated", &SupportEstimate::supports_evaluated);

    py::class_<Theorem1Result>(m, "Theorem1Result")
        .def_readonly("C", &Theorem1Result::C)
        .def_readonly("K1", &Theorem1Result::K1)
        .def_readonly("energy_bound", &Theorem1Result::energy_bound)
        .def_readonly("norm_bound", &Theorem1Result::norm_bound)
        .def_readonly("prob_lower", &Theorem1Result::prob_lower)
        .def_readonly("prob_lower_unclamped", &Theorem1Result::prob_lower_unclamped)
        .def_readonly("vacuous", &Theorem1Result::vacuous);

    py::class_<Theorem2Result>(m, "Theorem2Result")
        .def_readonly("K1", &Theorem2Result::K1)
        .def_readonly("K2", &Theorem2Result::K2)
        .def_readonly("K3", &Theorem2Result::K3)
        .def_readonly("K4", &Theorem2Result::K4)
        .def_readonly("mu_threshold_no_miss", &Theorem2Result::mu_threshold_no_miss)
        .def_readonly("mu_threshold_perfect", &Theorem2Result::mu_threshold_perfect)
        .def_readonly("prob_no_miss", &Theorem2Result::prob_no_miss)
        .def_readonly("prob_perfect", &Theorem2Result::prob_perfect)
        .def_readonly("prob_unclamped", &Theorem2Result::prob_unclamped)
        .def_readonly("vacuous", &Theorem2Result::vacuous);

    py::class_<Fig1Row>(m, "Fig1Row")
        .def_readonly("beta", &Fig1Row::beta)
        .def_readonly("k1", &Fig1Row::k1)
        .def_readonly("prob_lower", &Fig1Row::prob_lower)
        .def_readonly("prob_lower_unclamped", &Fig1Row::prob_lower_unclamped);

    py::class_<SupportPartition>(m, "SupportPartition")
        .def_readonly("correct", &SupportPartition::correct)
        .def_readonly("missed", &SupportPartition::missed)
        .def_readonly("false_alarms", &SupportPartition::false_alarms)
        .def_readonly("true_rejections", &SupportPartition::true_rejections);

    py::class_<ProjectionReport>(m, "ProjectionReport")
        .def_readonly("subspace_support", &ProjectionReport::subspace_support)
        .def_readonly("parallel_energy", &ProjectionReport::parallel_energy)
        .def_readonly("orthogonal_energy", &ProjectionReport::orthogonal_energy);

    py::class_<PropositionCheck>(m, "PropositionCheck")
        .def_readonly("name", &PropositionCheck::name)
        .def_readonly("measured", &PropositionCheck::measured)
        .def_readonly("bound", &PropositionCheck::bound)
        .def_readonly("lower_bound", &PropositionCheck::lower_bound)
        .def_readonly("passed", &PropositionCheck::passed)
        .def_readonly("vacuous", &PropositionCheck::vacuous)
        .def_readonly("trivial", &PropositionCheck::trivial);

    py::class_<PropositionReport>(m, "PropositionReport")
        .def_readonly("epsilon", &PropositionReport::epsilon)
        .def_readonly("support_i", &PropositionReport::support_i)
        .def_readonly("support_j", &PropositionReport::support_j)
        .def_readonly("checks", &PropositionReport::checks)
        .def_readonly("all_passed", &PropositionReport::all_passed);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init([](const ModelParams& params, const BoundParams& bounds, std::size_t trials,
                         std::uint64_t master_seed, const std::string& solver, double cardinality_q,
                         const std::string& rip_mode, std::size_t rip_samples) {
                 ExperimentConfig c;
                 c.params = params;
                 c.bounds = bounds;
                 c.trials = trials;
                 c.master_seed = master_seed;
                 c.solver = solver_from_string(solver);
                 c.cardinality_q = cardinality_q;
                 c.rip_mode = rip_mode_from_string(rip_mode);
                 c.rip_samples = rip_samples;
                 c.validate();
                 return c;
             }),
             py::arg("params"), py::arg("bounds"), py::arg("trials"), py::arg("master_seed"),
             py::arg("solver") = "exhaustive", py::arg("cardinality_q") = 2.0,
             py::arg("rip_mode") = "exhaustive", py::arg("rip_samples") = 0)
        .def_readonly("params", &ExperimentConfig::params)
        .def_readonly("bounds", &ExperimentConfig::bounds)
        .def_readonly("trials", &ExperimentConfig::trials)
        .def_readonly("master_seed", &ExperimentConfig::master_seed)
        .def_property_readonly("cardinality_cap", &ExperimentConfig::cardinality_cap);

    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("trial_id", &TrialRecord::trial_id)
        .def_readonly("seed", &TrialRecord::seed)
        .def_readonly("true_support_size", &TrialRecord::true_support_size)
        .def_readonly("est_support_size", &TrialRecord::est_support_size)
        .def_readonly("missed_count", &TrialRecord::missed_count)
        .def_readonly("false_count", &TrialRecord::false_count)
        .def_readonly("missed_energy", &TrialRecord::missed_energy)
        .def_readonly("theorem1_energy_bound", &TrialRecord::theorem1_energy_bound)
        .def_readonly("bound_satisfied", &TrialRecord::bound_satisfied)
        .def_readonly("event_e", &TrialRecord::event_e)
        .def_readonly("cost_true", &TrialRecord::cost_true)
        .def_readonly("cost_est", &TrialRecord::cost_est)
        .def("to_json_line", &to_json_line);

    py::class_<Aggregate>(m, "Aggregate")
        .def_readonly("trials_run", &Aggregate::trials_run)
        .def_readonly("failed_trials", &Aggregate::failed_trials)
        .def_readonly("eligible_trials", &Aggregate::eligible_trials)
        .def_readonly("frac_bound_satisfied", &Aggregate::frac_bound_satisfied)
        .def_readonly("frac_bound_satisfied_unconditioned",
                      &Aggregate::frac_bound_satisfied_unconditioned)
        .def_readonly("frac_event_e", &Aggregate::frac_event_e)
        .def_readonly("frac_no_miss", &Aggregate::frac_no_miss)
        .def_readonly("frac_no_miss_unconditioned", &Aggregate::frac_no_miss_unconditioned)
        .def_readonly("frac_perfect", &Aggregate::frac_perfect)
        .def_readonly("frac_perfect_unconditioned", &Aggregate::frac_perfect_unconditioned)
        .def_readonly("mean_missed_energy", &Aggregate::mean_missed_energy)
        .def_readonly("theorem1_prob_lower", &Aggregate::theorem1_prob_lower)
        .def_readonly("theorem1_prob_lower_unclamped", &Aggregate::theorem1_prob_lower_unclamped)
        .def_readonly("theorem1_vacuous", &Aggregate::theorem1_vacuous)
        .def_readonly("theorem2_prob_no_miss", &Aggregate::theorem2_prob_no_miss)
        .def_readonly("theorem2_prob_perfect", &Aggregate::theorem2_prob_perfect)
        .def_readonly("theorem2_prob_unclamped", &Aggregate::theorem2_prob_unclamped)
        .def_readonly("theorem2_vacuous", &Aggregate::theorem2_vacuous)
        .def("to_json", &aggregate_json);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("records", &ExperimentResult::records)
        .def_readonly("failed_trial_ids", &ExperimentResult::failed_trial_ids)
        .def_readonly("aggregate", &ExperimentResult::aggregate);

    m.def("generate_instance", &generate_instance, py::arg("params"), py::arg("seed"));
    m.def(
        "estimate_rip",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, std::size_t k,
           const std::string& mode, std::size_t n_samples, std::uint64_t seed) {
            Rng rng(seed);
            return estimate_rip(matrix_from_numpy(a), k, rip_mode_from_string(mode), n_samples, rng);
        },
        py::arg("matrix"), py::arg("level"), py::arg("mode") = "exhaustive",
        py::arg("n_samples") = 0, py::arg("seed") = 0);

    m.def("gamma_cost", &gamma_cost, py::arg("support"), py::arg("instance"));
    m.def("exhaustive_map", &exhaustive_map, py::arg("instance"), py::arg("cap"));
    m.def("greedy_map", &greedy_map, py::arg("instance"), py::arg("cap"));
    m.def("regress_on_support", &regress_on_support, py::arg("instance"), py::arg("support"));
    m.def("default_cardinality_cap", &default_cardinality_cap, py::arg("params"),
          py::arg("q") = 2.0);

    m.def("constant_C", &constant_C, py::arg("params"));
    m.def("theorem1", &theorem1, py::arg("params"), py::arg("bounds"));
    m.def("theorem2", &theorem2, py::arg("params"), py::arg("bounds"));
    m.def("chi_sq_tail_bound", &chi_sq_tail_bound, py::arg("n"), py::arg("beta"));
    m.def("event_E_prob_lower", &event_E_prob_lower, py::arg("params"));
    m.def("regression_error_bound", &regression_error_bound, py::arg("params"), py::arg("bounds"),
          py::arg("epsilon"));
    m.def("fig1_sweep", &fig1_sweep, py::arg("params"), py::arg("beta_grid"));

    m.def("partition_supports", &partition_supports, py::arg("true_support"),
          py::arg("est_support"), py::arg("n"));
    m.def("missed_energy", &missed_energy, py::arg("signal"), py::arg("partition"));
    m.def(
        "project_noise",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const std::vector<int>& support, const Vector& e) {
            return project_noise(matrix_from_numpy(a), support, e);
        },
        py::arg("matrix"), py::arg("support"), py::arg("noise"));
    m.def(
        "check_propositions",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const std::vector<int>& s_i, const std::vector<int>& s_j, const ModelParams& params,
           double epsilon) {
            return check_propositions(matrix_from_numpy(a), s_i, s_j, params, epsilon);
        },
        py::arg("matrix"), py::arg("support_i"), py::arg("support_j"), py::arg("params"),
        py::arg("epsilon"));

    m.def("trial_seed", &trial_seed, py::arg("master_seed"), py::arg("trial_id"));
    m.def("run_trial", &run_trial, py::arg("config"), py::arg("trial_id"));
    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
}
