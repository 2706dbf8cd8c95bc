#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "bgmap/errors.hpp"

namespace bgmap {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles. The only matrix representation in the
/// library; problem sizes are small enough that sparsity never pays off.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector& data() { return data_; }
    const Vector& data() const { return data_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vector data_;
};

/// Thin SVD A = U diag(s) V^T with U M-by-k, s descending, V k-by-k.
/// Columns of U are orthonormal even when A is rank deficient (null directions
/// are filled with an orthonormal completion and paired with zero values).
struct ThinSvd {
    DenseMatrix left_vectors;
    Vector singular_values;
    DenseMatrix right_vectors;
};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
struct CholeskyFactor {
    DenseMatrix lower;

    double logdet() const;
    Vector solve(const Vector& b) const;
};

/// Factor a symmetric positive definite matrix. Symmetry is checked to
/// 1e-10 relative; a non-positive pivot throws NumericalError naming its index.
CholeskyFactor cholesky(const DenseMatrix& g);

/// One-sided Jacobi thin SVD. Requires rows >= cols (callers transpose when
/// needed) and finite entries; throws NumericalError if the sweep cap is hit.
ThinSvd thin_svd(const DenseMatrix& a);

/// ln det(G) for symmetric positive definite G, via Cholesky. Never forms the
/// determinant itself.
double logdet_psd(const DenseMatrix& g);

/// Solve G v = b for symmetric positive definite G. One step of iterative
/// refinement keeps the residual within 1e-8 relative up to condition 1e8.
Vector solve_psd(const DenseMatrix& g, const Vector& b);

/// (smallest, largest) singular value of an arbitrary finite matrix.
std::pair<double, double> extreme_singular_values(const DenseMatrix& a);

// Dense helpers shared across the library.
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
Vector matvec(const DenseMatrix& a, const Vector& x);
Vector matvec_transposed(const DenseMatrix& a, const Vector& x); // A^T x
DenseMatrix select_columns(const DenseMatrix& a, const std::vector<int>& indices);
DenseMatrix gram(const DenseMatrix& a); // A^T A
double dot(const Vector& a, const Vector& b);
double norm_sq(const Vector& a);
double norm2(const Vector& a);

/// Orthonormal basis of the orthogonal complement of the column span of an
/// M-by-k matrix with orthonormal columns; result is M-by-(M-k).
DenseMatrix orthonormal_complement(const DenseMatrix& u);

} // namespace bgmap
