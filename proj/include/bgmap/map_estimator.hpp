#pragma once

#include <cstdint>
#include <vector>

#include "bgmap/signal_model.hpp"

namespace bgmap {

/// The three terms of the support cost: total = gamma1/2 + gamma2/2 + gamma3.
/// gamma1 is the log-determinant term, gamma2 the quadratic form on the
/// centered residual, gamma3 the |S| ln((1-p)/p) prior penalty.
struct GammaBreakdown {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    double total = 0.0;
};

enum class SolverKind { Exhaustive, Greedy };

struct SupportEstimate {
    std::vector<int> support;
    GammaBreakdown cost;
    SolverKind solver = SolverKind::Exhaustive;
    std::uint64_t supports_evaluated = 0;
};

/// Supports enumerated by the exhaustive solver before bailing out to greedy.
inline constexpr std::uint64_t kMapEnumerationCap = 2'000'000;

/// Cost of a candidate support. The log-determinant and the quadratic form
/// are both evaluated in |S|-dimensional form through one Cholesky of
/// I + (sigma1^2/sigma_e^2) A_S^T A_S; no M-by-M factorization ever occurs.
GammaBreakdown gamma_cost(const std::vector<int>& support, const Instance& inst);

/// Global minimizer of gamma_cost over all supports of size <= cap.
/// Ties prefer the smaller support, then the lexicographically smallest.
SupportEstimate exhaustive_map(const Instance& inst, std::size_t cap);

/// Forward selection with single-swap and single-removal refinement after
/// each addition. Deterministic; never beats the exhaustive solver.
SupportEstimate greedy_map(const Instance& inst, std::size_t cap);

/// Least-squares coefficients on the given support, zero elsewhere.
/// Requires A_S to have full column rank (smallest singular value > 1e-10).
Vector regress_on_support(const Instance& inst, const std::vector<int>& support);

/// floor(q N p), the cardinality constraint of the estimator.
std::size_t default_cardinality_cap(const ModelParams& params, double q = 2.0);

} // namespace bgmap
