#include "bgmap/theory_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace bgmap {

namespace {

constexpr double kTwoLnTwoMinusOne = 0.38629436111989062; // 2 ln 2 - 1

void require_beta(double beta, const char* name) {
    if (!(beta > 1.0)) {
        throw ValidationError(std::string(name) + " must exceed 1");
    }
}

double np_of(const ModelParams& params) {
    return static_cast<double>(params.N) * params.p;
}

} // namespace

double constant_C(const ModelParams& params) {
    params.validate();
    if (!(params.p > 0.0)) throw ValidationError("constant_C: requires p in (0, 1/2)");
    const double ratio = params.sigma1 * params.sigma1 / (params.sigma_e * params.sigma_e);
    return std::log(1.0 + 4.0 * ratio / 3.0) + 2.0 * std::log((1.0 - params.p) / params.p);
}

Theorem1Result theorem1(const ModelParams& params, const BoundParams& bounds) {
    require_beta(bounds.beta, "theorem1: beta");
    const double beta = bounds.beta;
    const double np = np_of(params);

    Theorem1Result r;
    r.C = constant_C(params);
    r.K1 = 2.0 * (std::sqrt(7.0 * beta + r.C) + std::sqrt(beta));
    r.norm_bound = r.K1 * std::sqrt(np) * params.sigma_e;
    r.energy_bound = r.norm_bound * r.norm_bound;

    const double event_factor = 1.0 - std::exp(-np * kTwoLnTwoMinusOne);
    const double tail_factor = 1.0 - 3.0 * std::exp(-np * (beta - 1.0 - std::log(beta)));
    r.prob_lower_unclamped = event_factor * tail_factor;
    r.prob_lower = std::clamp(r.prob_lower_unclamped, 0.0, 1.0);
    r.vacuous = r.prob_lower_unclamped <= 0.0;
    return r;
}

Theorem2Result theorem2(const ModelParams& params, const BoundParams& bounds) {
    require_beta(bounds.beta, "theorem2: beta");
    require_beta(bounds.beta_bar, "theorem2: beta_bar");
    const double beta = bounds.beta;
    const double beta_bar = bounds.beta_bar;
    const double np = np_of(params);

    const Theorem1Result t1 = theorem1(params, bounds);

    Theorem2Result r;
    r.K1 = t1.K1;
    r.K2 = std::sqrt(beta_bar);
    r.K3 = std::max(r.K2, 6.0 * std::sqrt(2.0 * beta * np));
    r.K4 = std::max(r.K1, 3.0 * (0.5 + std::sqrt(3.0)) * std::sqrt(2.0 * beta));
    r.mu_threshold_no_miss = r.K2 * params.sigma1 + r.K1 * std::sqrt(np) * params.sigma_e;
    r.mu_threshold_perfect = r.K3 * params.sigma1 + r.K4 * std::sqrt(np) * params.sigma_e;

    const double event_factor = 1.0 - std::exp(-np * kTwoLnTwoMinusOne);
    const double tail_factor = 1.0 - 3.0 * std::exp(-np * (beta - 1.0 - std::log(beta))) -
                               std::exp(-(beta_bar - 1.0 - std::log(beta_bar)) / 2.0);
    r.prob_unclamped = event_factor * tail_factor;
    r.prob_no_miss = std::clamp(r.prob_unclamped, 0.0, 1.0);
    r.prob_perfect = r.prob_no_miss; // same probability in the statement
    r.vacuous = r.prob_unclamped <= 0.0;
    return r;
}

double chi_sq_tail_bound(std::size_t n, double beta) {
    if (n == 0) throw ValidationError("chi_sq_tail_bound: requires n >= 1");
    require_beta(beta, "chi_sq_tail_bound: beta");
    return std::exp(-0.5 * static_cast<double>(n) * (beta - 1.0 - std::log(beta)));
}

double event_E_prob_lower(const ModelParams& params) {
    params.validate();
    return 1.0 - std::exp(-np_of(params) * kTwoLnTwoMinusOne);
}

double regression_error_bound(const ModelParams& params, const BoundParams& bounds,
                              double epsilon) {
    require_beta(bounds.beta, "regression_error_bound: beta");
    if (!(epsilon >= 0.0) || !(epsilon <= 1.0 / 3.0)) {
        throw ValidationError("regression_error_bound: requires epsilon in [0, 1/3]");
    }
    const Theorem1Result t1 = theorem1(params, bounds);
    const double np = np_of(params);
    return (t1.K1 / (1.0 - epsilon) + std::sqrt(bounds.beta / (1.0 - epsilon))) *
           std::sqrt(np) * params.sigma_e;
}

std::vector<Fig1Row> fig1_sweep(const ModelParams& params, const std::vector<double>& beta_grid) {
    std::vector<Fig1Row> rows;
    rows.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        const Theorem1Result t1 = theorem1(params, BoundParams{beta, 2.0});
        rows.push_back(Fig1Row{beta, t1.K1, t1.prob_lower, t1.prob_lower_unclamped});
    }
    return rows;
}

} // namespace bgmap
