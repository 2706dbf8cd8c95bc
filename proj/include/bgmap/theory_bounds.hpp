#pragma once

#include <vector>

#include "bgmap/signal_model.hpp"

namespace bgmap {

/// Slack parameters of the tail bounds; both must exceed 1.
struct BoundParams {
    double beta = 2.0;
    double beta_bar = 16.0;
};

/// Missed-energy bound: ||x_1||_2 <= K1 sqrt(Np) sigma_e with probability at
/// least prob_lower. Probabilities are clamped to [0, 1]; the raw value is
/// kept for diagnostics and `vacuous` marks a clamped-to-zero bound.
struct Theorem1Result {
    double C = 0.0;
    double K1 = 0.0;
    double energy_bound = 0.0; // K1^2 Np sigma_e^2
    double norm_bound = 0.0;   // K1 sqrt(Np) sigma_e
    double prob_lower = 0.0;
    double prob_lower_unclamped = 0.0;
    bool vacuous = false;
};

/// Mean-magnitude thresholds for no missed coefficient and for perfect
/// support recovery, with the shared probability bound.
struct Theorem2Result {
    double K1 = 0.0;
    double K2 = 0.0;
    double K3 = 0.0;
    double K4 = 0.0;
    double mu_threshold_no_miss = 0.0;
    double mu_threshold_perfect = 0.0;
    double prob_no_miss = 0.0;
    double prob_perfect = 0.0;
    double prob_unclamped = 0.0;
    bool vacuous = false;
};

/// C = ln(1 + 4 sigma1^2 / (3 sigma_e^2)) + 2 ln((1-p)/p). Requires p in (0, 1/2).
double constant_C(const ModelParams& params);

Theorem1Result theorem1(const ModelParams& params, const BoundParams& bounds);
Theorem2Result theorem2(const ModelParams& params, const BoundParams& bounds);

/// Chernoff bound on P[Z > beta n sigma^2] for Z chi-squared with n degrees
/// of freedom: exp(-(n/2)(beta - 1 - ln beta)).
double chi_sq_tail_bound(std::size_t n, double beta);

/// Lower bound on P[|S| <= 2Np]: 1 - exp(-Np (2 ln 2 - 1)).
double event_E_prob_lower(const ModelParams& params);

/// (K1/(1-eps) + sqrt(beta/(1-eps))) sqrt(Np) sigma_e. Requires eps in [0, 1/3].
double regression_error_bound(const ModelParams& params, const BoundParams& bounds,
                              double epsilon);

struct Fig1Row {
    double beta = 0.0;
    double k1 = 0.0;
    double prob_lower = 0.0;
    double prob_lower_unclamped = 0.0;
};

/// One theorem-1 evaluation per grid point, in grid order.
std::vector<Fig1Row> fig1_sweep(const ModelParams& params, const std::vector<double>& beta_grid);

} // namespace bgmap
