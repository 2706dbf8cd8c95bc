#include "bgmap/map_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "bgmap/combinatorics.hpp"

namespace bgmap {

namespace {

// Deterministic preference order: cost, then support size, then lexicographic.
bool better(double cost, const std::vector<int>& support, double best_cost,
            const std::vector<int>& best_support) {
    if (cost != best_cost) return cost < best_cost;
    if (support.size() != best_support.size()) return support.size() < best_support.size();
    return support < best_support;
}

class CostCache {
public:
    explicit CostCache(const Instance& inst) : inst_(inst) {}

    const GammaBreakdown& eval(const std::vector<int>& support) {
        auto it = cache_.find(support);
        if (it == cache_.end()) {
            it = cache_.emplace(support, gamma_cost(support, inst_)).first;
        }
        return it->second;
    }

    std::uint64_t evaluations() const { return cache_.size(); }

private:
    const Instance& inst_;
    std::map<std::vector<int>, GammaBreakdown> cache_;
};

std::vector<int> with_index(const std::vector<int>& support, int idx) {
    std::vector<int> out = support;
    out.insert(std::upper_bound(out.begin(), out.end(), idx), idx);
    return out;
}

std::vector<int> without_index(const std::vector<int>& support, int idx) {
    std::vector<int> out = support;
    out.erase(std::find(out.begin(), out.end(), idx));
    return out;
}

} // namespace

GammaBreakdown gamma_cost(const std::vector<int>& support, const Instance& inst) {
    const ModelParams& pr = inst.params;
    const std::size_t k = support.size();
    const double sigma_e_sq = pr.sigma_e * pr.sigma_e;
    const double snr = pr.sigma1 * pr.sigma1 / sigma_e_sq;

    GammaBreakdown g;
    g.gamma3 = k == 0 ? 0.0 : static_cast<double>(k) * std::log((1.0 - pr.p) / pr.p);

    if (k == 0) {
        g.gamma1 = static_cast<double>(pr.M) * std::log(sigma_e_sq);
        g.gamma2 = norm_sq(inst.observation) / sigma_e_sq;
    } else {
        const DenseMatrix a_s = select_columns(inst.matrix, support);

        // centered residual r = y - mu1 A_S 1
        Vector r = inst.observation;
        for (std::size_t i = 0; i < pr.M; ++i) {
            double rowsum = 0.0;
            for (std::size_t j = 0; j < k; ++j) rowsum += a_s(i, j);
            r[i] -= pr.mu1 * rowsum;
        }

        // B = I + (sigma1^2/sigma_e^2) A_S^T A_S carries both terms:
        //   ln det Phi = M ln sigma_e^2 + ln det B
        //   r^T Phi^-1 r = (|r|^2 - snr * w^T B^-1 w) / sigma_e^2,  w = A_S^T r
        DenseMatrix b = gram(a_s);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) b(i, j) *= snr;
            b(i, i) += 1.0;
        }
        CholeskyFactor chol;
        try {
            chol = cholesky(b);
        } catch (const NumericalError&) {
            throw NumericalError("gamma_cost: inner matrix not positive definite for |S|=" +
                                 std::to_string(k) + " (corrupted measurement matrix?)");
        }

        const Vector w = matvec_transposed(a_s, r);
        const Vector v = chol.solve(w);

        g.gamma1 = static_cast<double>(pr.M) * std::log(sigma_e_sq) + chol.logdet();
        g.gamma2 = (norm_sq(r) - snr * dot(w, v)) / sigma_e_sq;
        if (g.gamma2 < 0.0) g.gamma2 = 0.0; // exact value is nonnegative
    }

    g.total = 0.5 * g.gamma1 + 0.5 * g.gamma2 + g.gamma3;
    return g;
}

SupportEstimate exhaustive_map(const Instance& inst, std::size_t cap) {
    const std::size_t n = inst.params.N;
    const std::size_t effective_cap = std::min(cap, n);

    if (count_supports(n, effective_cap, kMapEnumerationCap) > kMapEnumerationCap) {
        throw ValidationError("exhaustive_map: more than " + std::to_string(kMapEnumerationCap) +
                              " supports at cap " + std::to_string(effective_cap) +
                              "; use greedy_map");
    }

    SupportEstimate best;
    best.solver = SolverKind::Exhaustive;
    best.support = {};
    best.cost = gamma_cost(best.support, inst);
    best.supports_evaluated = 1;

    for (std::size_t k = 1; k <= effective_cap; ++k) {
        std::vector<int> comb = first_combination(k);
        do {
            const GammaBreakdown g = gamma_cost(comb, inst);
            ++best.supports_evaluated;
            if (better(g.total, comb, best.cost.total, best.support)) {
                best.support = comb;
                best.cost = g;
            }
        } while (next_combination(comb, n));
    }
    return best;
}

SupportEstimate greedy_map(const Instance& inst, std::size_t cap) {
    const std::size_t n = inst.params.N;
    CostCache cache(inst);

    std::vector<int> current;
    GammaBreakdown cost = cache.eval(current);

    for (;;) {
        if (current.size() >= std::min(cap, n)) break;

        // best single addition
        int best_add = -1;
        double best_total = cost.total;
        for (int j = 0; j < static_cast<int>(n); ++j) {
            if (std::binary_search(current.begin(), current.end(), j)) continue;
            const GammaBreakdown g = cache.eval(with_index(current, j));
            if (g.total < best_total) {
                best_total = g.total;
                best_add = j;
            }
        }
        if (best_add < 0) break;
        current = with_index(current, best_add);
        cost = cache.eval(current);

        // refine with single removals and single swaps until locally optimal
        bool refined = true;
        while (refined) {
            refined = false;
            std::vector<int> best_move;
            double move_total = cost.total;
            for (int i : current) {
                const std::vector<int> t = without_index(current, i);
                const GammaBreakdown g = cache.eval(t);
                if (g.total < move_total) {
                    move_total = g.total;
                    best_move = t;
                }
            }
            for (int i : current) {
                for (int j = 0; j < static_cast<int>(n); ++j) {
                    if (std::binary_search(current.begin(), current.end(), j)) continue;
                    const std::vector<int> t = with_index(without_index(current, i), j);
                    const GammaBreakdown g = cache.eval(t);
                    if (g.total < move_total) {
                        move_total = g.total;
                        best_move = t;
                    }
                }
            }
            if (move_total < cost.total) {
                current = best_move;
                cost = cache.eval(current);
                refined = true;
            }
        }
    }

    SupportEstimate out;
    out.support = current;
    out.cost = cost;
    out.solver = SolverKind::Greedy;
    out.supports_evaluated = cache.evaluations();
    return out;
}

Vector regress_on_support(const Instance& inst, const std::vector<int>& support) {
    Vector x(inst.params.N, 0.0);
    if (support.empty()) return x;

    const DenseMatrix a_s = select_columns(inst.matrix, support);
    const auto [smin, smax] = extreme_singular_values(a_s);
    (void)smax;
    if (!(smin > 1e-10)) {
        throw NumericalError("regress_on_support: rank-deficient submatrix, smallest singular value " +
                             std::to_string(smin));
    }

    const Vector rhs = matvec_transposed(a_s, inst.observation);
    const Vector coeffs = solve_psd(gram(a_s), rhs);
    for (std::size_t j = 0; j < support.size(); ++j) {
        x[static_cast<std::size_t>(support[j])] = coeffs[j];
    }
    return x;
}

std::size_t default_cardinality_cap(const ModelParams& params, double q) {
    if (!(q > 1.0)) throw ValidationError("default_cardinality_cap: requires q > 1");
    const double raw = q * static_cast<double>(params.N) * params.p;
    return static_cast<std::size_t>(std::floor(raw));
}

} // namespace bgmap
