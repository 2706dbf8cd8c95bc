#include "bgmap/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bgmap/combinatorics.hpp"

namespace bgmap {

namespace {

double support_deviation(const DenseMatrix& a, const std::vector<int>& support) {
    const DenseMatrix sub = select_columns(a, support);
    const auto [smin, smax] = extreme_singular_values(sub);
    return std::max(smax * smax - 1.0, 1.0 - smin * smin);
}

} // namespace

void ModelParams::validate() const {
    if (N == 0 || M == 0) throw ValidationError("ModelParams: N and M must be positive");
    if (M >= N) throw ValidationError("ModelParams: requires M < N");
    if (!(p >= 0.0) || !(p < 0.5)) throw ValidationError("ModelParams: requires 0 <= p < 1/2");
    if (!(sigma1 > 0.0)) throw ValidationError("ModelParams: sigma1 must be positive");
    if (!(sigma_e > 0.0)) throw ValidationError("ModelParams: sigma_e must be positive");
    if (!std::isfinite(mu1)) throw ValidationError("ModelParams: mu1 must be finite");
}

std::vector<int> draw_support(const ModelParams& params, Rng& rng) {
    std::vector<int> support;
    for (std::size_t i = 0; i < params.N; ++i) {
        if (rng.bernoulli(params.p)) support.push_back(static_cast<int>(i));
    }
    return support;
}

SparseSignal draw_signal(const std::vector<int>& support, const ModelParams& params, Rng& rng) {
    SparseSignal s;
    s.support = support;
    s.values.assign(params.N, 0.0);
    for (int idx : support) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= params.N) {
            throw ValidationError("draw_signal: support index " + std::to_string(idx) +
                                  " out of range");
        }
        s.values[static_cast<std::size_t>(idx)] = rng.gaussian(params.mu1, params.sigma1);
    }
    return s;
}

DenseMatrix draw_matrix(const ModelParams& params, Rng& rng) {
    DenseMatrix a(params.M, params.N);
    const double sd = 1.0 / std::sqrt(static_cast<double>(params.M));
    for (std::size_t i = 0; i < params.M; ++i)
        for (std::size_t j = 0; j < params.N; ++j) a(i, j) = rng.gaussian(0.0, sd);
    return a;
}

Vector draw_noise(const ModelParams& params, Rng& rng) {
    Vector e(params.M);
    for (std::size_t i = 0; i < params.M; ++i) e[i] = rng.gaussian(0.0, params.sigma_e);
    return e;
}

Instance generate_instance(const ModelParams& params, std::uint64_t seed) {
    params.validate();
    Rng support_rng(derive_stream_seed(seed, "support"));
    Rng signal_rng(derive_stream_seed(seed, "signal"));
    Rng matrix_rng(derive_stream_seed(seed, "matrix"));
    Rng noise_rng(derive_stream_seed(seed, "noise"));

    Instance inst;
    inst.params = params;
    inst.signal = draw_signal(draw_support(params, support_rng), params, signal_rng);
    inst.matrix = draw_matrix(params, matrix_rng);
    inst.noise = draw_noise(params, noise_rng);
    inst.observation = matvec(inst.matrix, inst.signal.values);
    for (std::size_t i = 0; i < params.M; ++i) inst.observation[i] += inst.noise[i];
    return inst;
}

RipEstimate estimate_rip(const DenseMatrix& a, std::size_t k, RipMode mode, std::size_t n_samples,
                         Rng& rng) {
    const std::size_t n = a.cols();
    if (k > n) throw ValidationError("estimate_rip: level k exceeds column count");

    RipEstimate est;
    est.sparsity_level = k;
    if (k == 0) {
        est.exhaustive = true;
        return est;
    }

    if (mode == RipMode::Exhaustive) {
        const std::uint64_t total = count_supports(n, k, kRipEnumerationCap);
        if (total > kRipEnumerationCap) {
            throw ValidationError(
                "estimate_rip: exhaustive enumeration exceeds the cap of " +
                std::to_string(kRipEnumerationCap) + " supports; use sampled mode");
        }
        for (std::size_t kk = 1; kk <= k; ++kk) {
            std::vector<int> comb = first_combination(kk);
            do {
                est.epsilon_hat = std::max(est.epsilon_hat, support_deviation(a, comb));
                ++est.supports_checked;
            } while (next_combination(comb, n));
        }
        est.exhaustive = true;
    } else {
        if (n_samples == 0) throw ValidationError("estimate_rip: sampled mode needs n_samples > 0");
        std::vector<int> deck(n);
        for (std::size_t i = 0; i < n; ++i) deck[i] = static_cast<int>(i);
        for (std::size_t s = 0; s < n_samples; ++s) {
            // partial Fisher-Yates: first k entries become a uniform k-subset
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(deck[i], deck[j]);
            }
            std::vector<int> support(deck.begin(), deck.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(support.begin(), support.end());
            est.epsilon_hat = std::max(est.epsilon_hat, support_deviation(a, support));
            ++est.supports_checked;
        }
        est.exhaustive = false;
    }
    return est;
}

} // namespace bgmap
