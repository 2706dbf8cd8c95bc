#include "bgmap/recovery_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgmap {

namespace {

constexpr double kSlack = 1e-9; // float slack on the proven inequalities

PropositionCheck upper_check(std::string name, double measured, double bound, bool vacuous) {
    PropositionCheck c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = bound;
    c.lower_bound = false;
    c.vacuous = vacuous;
    c.passed = vacuous || measured <= bound * (1.0 + kSlack) + 1e-12;
    return c;
}

PropositionCheck lower_check(std::string name, double measured, double bound, bool vacuous) {
    PropositionCheck c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = bound;
    c.lower_bound = true;
    c.vacuous = vacuous;
    c.passed = vacuous || measured >= bound * (1.0 - kSlack) - 1e-12;
    return c;
}

void validate_support(const std::vector<int>& support, std::size_t n, const char* name) {
    int prev = -1;
    for (int idx : support) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= n) {
            throw ValidationError(std::string(name) + ": index out of range");
        }
        if (idx <= prev) {
            throw ValidationError(std::string(name) + ": support must be sorted and duplicate free");
        }
        prev = idx;
    }
}

} // namespace

SupportPartition partition_supports(const std::vector<int>& true_support,
                                    const std::vector<int>& est_support, std::size_t n) {
    validate_support(true_support, n, "partition_supports: true support");
    validate_support(est_support, n, "partition_supports: estimated support");

    SupportPartition part;
    for (std::size_t i = 0; i < n; ++i) {
        const int idx = static_cast<int>(i);
        const bool in_true = std::binary_search(true_support.begin(), true_support.end(), idx);
        const bool in_est = std::binary_search(est_support.begin(), est_support.end(), idx);
        if (in_true && in_est) part.correct.push_back(idx);
        else if (in_true) part.missed.push_back(idx);
        else if (in_est) part.false_alarms.push_back(idx);
        else part.true_rejections.push_back(idx);
    }
    return part;
}

double missed_energy(const SparseSignal& signal, const SupportPartition& partition) {
    double acc = 0.0;
    for (int idx : partition.missed) {
        const double x = signal.values.at(static_cast<std::size_t>(idx));
        acc += x * x;
    }
    return acc;
}

ProjectionReport project_noise(const DenseMatrix& a, const std::vector<int>& support,
                               const Vector& e) {
    if (e.size() != a.rows()) throw ValidationError("project_noise: noise length mismatch");
    validate_support(support, a.cols(), "project_noise: support");

    ProjectionReport report;
    report.subspace_support = support;
    if (support.empty()) {
        report.parallel_energy = 0.0;
        report.orthogonal_energy = norm_sq(e);
        return report;
    }

    const ThinSvd svd = thin_svd(select_columns(a, support));
    report.parallel_energy = norm_sq(matvec_transposed(svd.left_vectors, e));
    report.orthogonal_energy = std::max(norm_sq(e) - report.parallel_energy, 0.0);
    return report;
}

PropositionReport check_propositions(const DenseMatrix& a, const std::vector<int>& support_i,
                                     const std::vector<int>& support_j, const ModelParams& params,
                                     double epsilon) {
    validate_support(support_i, a.cols(), "check_propositions: S_i");
    validate_support(support_j, a.cols(), "check_propositions: S_j");
    for (int idx : support_i) {
        if (std::binary_search(support_j.begin(), support_j.end(), idx)) {
            throw ValidationError("check_propositions: S_i and S_j must be disjoint");
        }
    }
    if (!(epsilon >= 0.0)) throw ValidationError("check_propositions: epsilon must be >= 0");

    PropositionReport report;
    report.epsilon = epsilon;
    report.support_i = support_i;
    report.support_j = support_j;

    const double inf = std::numeric_limits<double>::infinity();
    const bool empty_factor = support_i.empty() || support_j.empty();
    if (empty_factor) {
        for (const char* name : {"cross_gram_norm", "parallel_projection_norm",
                                 "orthogonal_projection_min", "basis_overlap_min",
                                 "phi_quadform_min"}) {
            PropositionCheck c;
            c.name = name;
            c.trivial = true;
            c.passed = true;
            report.checks.push_back(c);
        }
        report.all_passed = true;
        return report;
    }

    const DenseMatrix a_i = select_columns(a, support_i);
    const DenseMatrix a_j = select_columns(a, support_j);
    const std::size_t m = a.rows();

    // (a) ||A_i^T A_j||_2 <= eps
    const DenseMatrix cross = matmul(transpose(a_i), a_j);
    report.checks.push_back(
        upper_check("cross_gram_norm", extreme_singular_values(cross).second, epsilon, false));

    const ThinSvd svd_i = thin_svd(a_i);
    const DenseMatrix u_par_i = svd_i.left_vectors;
    const DenseMatrix u_perp_i = orthonormal_complement(u_par_i);

    // (b) ||U_par_i^T A_j||_2 <= eps / sqrt(1 - eps)
    {
        const double measured = extreme_singular_values(matmul(transpose(u_par_i), a_j)).second;
        const bool vac = epsilon >= 1.0;
        report.checks.push_back(upper_check("parallel_projection_norm", measured,
                                            vac ? inf : epsilon / std::sqrt(1.0 - epsilon), vac));
    }

    // (c) sigma_min(U_perp_i^T A_j) >= sqrt((1-2eps)/(1-eps))
    {
        double measured = 0.0;
        if (u_perp_i.cols() > 0) {
            measured = extreme_singular_values(matmul(transpose(u_perp_i), a_j)).first;
        }
        const bool vac = epsilon >= 0.5;
        report.checks.push_back(lower_check(
            "orthogonal_projection_min", measured,
            vac ? 0.0 : std::sqrt((1.0 - 2.0 * epsilon) / (1.0 - epsilon)), vac));
    }

    // (d) sigma_min(U_perp_i^T U_par_j) >= sqrt((1-2eps)/(1-eps^2))
    {
        const ThinSvd svd_j = thin_svd(a_j);
        double measured = 0.0;
        if (u_perp_i.cols() > 0) {
            measured =
                extreme_singular_values(matmul(transpose(u_perp_i), svd_j.left_vectors)).first;
        }
        const bool vac = epsilon >= 0.5;
        report.checks.push_back(lower_check(
            "basis_overlap_min", measured,
            vac ? 0.0 : std::sqrt((1.0 - 2.0 * epsilon) / (1.0 - epsilon * epsilon)), vac));
    }

    // (e) sigma_min(A_j^T Phi(S_i)^-1 A_j) >= (1-2eps) / ((1-eps) sigma_e^2)
    {
        const double sigma1_sq = params.sigma1 * params.sigma1;
        const double sigma_e_sq = params.sigma_e * params.sigma_e;
        DenseMatrix phi(m, m, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                double acc = 0.0;
                for (std::size_t t = 0; t < a_i.cols(); ++t) acc += a_i(r, t) * a_i(c, t);
                phi(r, c) = sigma1_sq * acc;
            }
            phi(r, r) += sigma_e_sq;
        }
        const CholeskyFactor chol = cholesky(phi);
        const std::size_t kj = a_j.cols();
        DenseMatrix quad(kj, kj, 0.0);
        std::vector<Vector> solved(kj);
        for (std::size_t c = 0; c < kj; ++c) {
            Vector col(m);
            for (std::size_t r = 0; r < m; ++r) col[r] = a_j(r, c);
            solved[c] = chol.solve(col);
        }
        for (std::size_t i = 0; i < kj; ++i) {
            for (std::size_t j = i; j < kj; ++j) {
                double acc = 0.0;
                for (std::size_t r = 0; r < m; ++r) acc += a_j(r, i) * solved[j][r];
                quad(i, j) = acc;
                quad(j, i) = acc;
            }
        }
        const double measured = extreme_singular_values(quad).first;
        const bool vac = epsilon >= 0.5;
        report.checks.push_back(lower_check(
            "phi_quadform_min", measured,
            vac ? 0.0 : (1.0 - 2.0 * epsilon) / ((1.0 - epsilon) * sigma_e_sq), vac));
    }

    report.all_passed = std::all_of(report.checks.begin(), report.checks.end(),
                                    [](const PropositionCheck& c) { return c.passed; });
    return report;
}

} // namespace bgmap
