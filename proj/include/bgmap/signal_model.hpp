#pragma once

#include <cstdint>
#include <vector>

#include "bgmap/linalg.hpp"
#include "bgmap/rng.hpp"

namespace bgmap {

/// Scalar model constants: ambient dimension N, measurement count M,
/// inclusion probability p, active-coefficient moments, noise level.
struct ModelParams {
    std::size_t N = 0;
    std::size_t M = 0;
    double p = 0.0;
    double mu1 = 0.0;
    double sigma1 = 1.0;
    double sigma_e = 1.0;

    /// Throws ValidationError when the parameters are outside the model.
    /// p = 0 is admitted as a degenerate edge (always-empty support); the
    /// closed-form bound constants additionally require p > 0.
    void validate() const;
};

/// Support set plus the dense coefficient vector; off-support entries are
/// exactly zero, support is sorted and duplicate free.
struct SparseSignal {
    std::vector<int> support;
    Vector values;
};

/// One generated problem: y = A x + e, reproducible bit-for-bit from the seed.
struct Instance {
    ModelParams params;
    DenseMatrix matrix;
    SparseSignal signal;
    Vector noise;
    Vector observation;
};

struct RipEstimate {
    std::size_t sparsity_level = 0;
    double epsilon_hat = 0.0;
    bool exhaustive = false;
    std::uint64_t supports_checked = 0;
};

enum class RipMode { Exhaustive, Sampled };

/// Supports enumerated exhaustively before bailing out to sampled mode.
inline constexpr std::uint64_t kRipEnumerationCap = 2'000'000;

std::vector<int> draw_support(const ModelParams& params, Rng& rng);
SparseSignal draw_signal(const std::vector<int>& support, const ModelParams& params, Rng& rng);

/// Measurement matrix with i.i.d. Gaussian(0, 1/M) entries, so each column
/// has unit expected squared norm.
DenseMatrix draw_matrix(const ModelParams& params, Rng& rng);

Vector draw_noise(const ModelParams& params, Rng& rng);

/// Composes the four draws from labeled sub-streams of one seed.
Instance generate_instance(const ModelParams& params, std::uint64_t seed);

/// Restricted-isometry constant of A at sparsity level k: the max deviation
/// of squared singular values from 1 over supports of size <= k. Exhaustive
/// mode enumerates every support (exact constant); sampled mode lower-bounds
/// it from n_samples random size-k supports.
RipEstimate estimate_rip(const DenseMatrix& a, std::size_t k, RipMode mode, std::size_t n_samples,
                         Rng& rng);

} // namespace bgmap
