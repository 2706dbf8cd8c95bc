#pragma once

#include <string>
#include <vector>

#include "bgmap/signal_model.hpp"

namespace bgmap {

/// Four-way split of {0..N-1} given the true and estimated supports:
/// correct (S0), missed (S1), false alarms (S2), true rejections (S3).
struct SupportPartition {
    std::vector<int> correct;
    std::vector<int> missed;
    std::vector<int> false_alarms;
    std::vector<int> true_rejections;
};

/// Energy split of a noise vector against the column span of a submatrix.
struct ProjectionReport {
    std::vector<int> subspace_support;
    double parallel_energy = 0.0;
    double orthogonal_energy = 0.0;
};

/// One operator-norm comparison against its closed-form bound. `vacuous`
/// marks bounds that are non-binding at the supplied epsilon (formula
/// non-positive or undefined); `trivial` marks empty-factor cases.
struct PropositionCheck {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool lower_bound = false;
    bool passed = false;
    bool vacuous = false;
    bool trivial = false;
};

struct PropositionReport {
    double epsilon = 0.0;
    std::vector<int> support_i;
    std::vector<int> support_j;
    std::vector<PropositionCheck> checks;
    bool all_passed = false;
};

SupportPartition partition_supports(const std::vector<int>& true_support,
                                    const std::vector<int>& est_support, std::size_t n);

/// Sum of squared signal values over the missed index set S1.
double missed_energy(const SparseSignal& signal, const SupportPartition& partition);

/// Projects e onto the orthonormal column basis of A restricted to `support`
/// (left singular vectors); the orthogonal energy is the Pythagorean rest.
ProjectionReport project_noise(const DenseMatrix& a, const std::vector<int>& support,
                               const Vector& e);

/// Evaluates the five near-orthogonality checks for disjoint supports S_i,
/// S_j at a supplied restricted-isometry constant: the cross-Gram operator
/// norm, the parallel/orthogonal projections of A_j against the column basis
/// of A_i, and the smallest singular value of A_j^T Phi(S_i)^-1 A_j.
PropositionReport check_propositions(const DenseMatrix& a, const std::vector<int>& support_i,
                                     const std::vector<int>& support_j, const ModelParams& params,
                                     double epsilon);

} // namespace bgmap
