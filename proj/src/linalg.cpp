#include "bgmap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bgmap {

namespace {

constexpr int kJacobiSweepCap = 60;
constexpr double kJacobiTol = 1e-14;

std::string dims(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

double max_abs(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw ValidationError("DenseMatrix: entry count " + std::to_string(data_.size()) +
                              " does not match shape " + dims(rows_, cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double x : data_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matmul: incompatible shapes " + dims(a.rows(), a.cols()) + " * " +
                              dims(b.rows(), b.cols()));
    }
    DenseMatrix c(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector matvec(const DenseMatrix& a, const Vector& x) {
    if (x.size() != a.cols()) throw ValidationError("matvec: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Vector matvec_transposed(const DenseMatrix& a, const Vector& x) {
    if (x.size() != a.rows()) throw ValidationError("matvec_transposed: dimension mismatch");
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * xi;
    }
    return y;
}

DenseMatrix select_columns(const DenseMatrix& a, const std::vector<int>& indices) {
    DenseMatrix s(a.rows(), indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const int col = indices[j];
        if (col < 0 || static_cast<std::size_t>(col) >= a.cols()) {
            throw ValidationError("select_columns: index " + std::to_string(col) +
                                  " out of range for " + dims(a.rows(), a.cols()));
        }
        for (std::size_t i = 0; i < a.rows(); ++i) s(i, j) = a(i, static_cast<std::size_t>(col));
    }
    return s;
}

DenseMatrix gram(const DenseMatrix& a) {
    DenseMatrix g(a.cols(), a.cols(), 0.0);
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < a.rows(); ++r) acc += a(r, i) * a(r, j);
            g(i, j) = acc;
            g(j, i) = acc;
        }
    }
    return g;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw ValidationError("dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_sq(const Vector& a) { return dot(a, a); }

double norm2(const Vector& a) { return std::sqrt(norm_sq(a)); }

CholeskyFactor cholesky(const DenseMatrix& g) {
    const std::size_t n = g.rows();
    if (g.cols() != n) throw ValidationError("cholesky: matrix not square, " + dims(g.rows(), g.cols()));

    double scale = max_abs(g.data());
    if (scale == 0.0) scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(g(i, j) - g(j, i)) > 1e-10 * scale) {
                throw ValidationError("cholesky: matrix not symmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            }
        }
    }

    DenseMatrix l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = g(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw NumericalError("cholesky: non-positive pivot at index " + std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = g(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / ljj;
        }
    }
    return CholeskyFactor{std::move(l)};
}

double CholeskyFactor::logdet() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < lower.rows(); ++i) acc += std::log(lower(i, i));
    return 2.0 * acc;
}

Vector CholeskyFactor::solve(const Vector& b) const {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw ValidationError("CholeskyFactor::solve: dimension mismatch");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[i];
        for (std::size_t k = 0; k < i; ++k) acc -= lower(i, k) * y[k];
        y[i] = acc / lower(i, i);
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= lower(k, ii) * x[k];
        x[ii] = acc / lower(ii, ii);
    }
    return x;
}

double logdet_psd(const DenseMatrix& g) { return cholesky(g).logdet(); }

Vector solve_psd(const DenseMatrix& g, const Vector& b) {
    const CholeskyFactor f = cholesky(g);
    Vector x = f.solve(b);
    // One refinement pass; keeps the residual bound at high condition numbers.
    Vector r = b;
    const Vector gx = matvec(g, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= gx[i];
    const Vector dx = f.solve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    return x;
}

ThinSvd thin_svd(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    if (m < k) {
        throw ValidationError("thin_svd: requires rows >= cols, got " + dims(m, k));
    }
    if (!a.all_finite()) {
        throw ValidationError("thin_svd: non-finite entries in " + dims(m, k) + " input");
    }

    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(k);

    if (k > 0) {
        bool converged = false;
        for (int sweep = 0; sweep < kJacobiSweepCap && !converged; ++sweep) {
            converged = true;
            for (std::size_t i = 0; i + 1 < k; ++i) {
                for (std::size_t j = i + 1; j < k; ++j) {
                    double aii = 0.0, ajj = 0.0, aij = 0.0;
                    for (std::size_t r = 0; r < m; ++r) {
                        aii += w(r, i) * w(r, i);
                        ajj += w(r, j) * w(r, j);
                        aij += w(r, i) * w(r, j);
                    }
                    if (aii == 0.0 || ajj == 0.0) continue;
                    if (std::abs(aij) <= kJacobiTol * std::sqrt(aii * ajj)) continue;
                    converged = false;

                    const double zeta = (ajj - aii) / (2.0 * aij);
                    const double sign = zeta >= 0.0 ? 1.0 : -1.0;
                    const double t = sign / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = c * t;
                    for (std::size_t r = 0; r < m; ++r) {
                        const double wi = w(r, i), wj = w(r, j);
                        w(r, i) = c * wi - s * wj;
                        w(r, j) = s * wi + c * wj;
                    }
                    for (std::size_t r = 0; r < k; ++r) {
                        const double vi = v(r, i), vj = v(r, j);
                        v(r, i) = c * vi - s * vj;
                        v(r, j) = s * vi + c * vj;
                    }
                }
            }
        }
        if (!converged) {
            throw NumericalError("thin_svd: Jacobi sweeps did not converge for " + dims(m, k));
        }
    }

    Vector sigma(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) acc += w(r, j) * w(r, j);
        sigma[j] = std::sqrt(acc);
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&sigma](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    ThinSvd out;
    out.left_vectors = DenseMatrix(m, k);
    out.right_vectors = DenseMatrix(k, k);
    out.singular_values.resize(k);

    const double sigma_max = k > 0 ? sigma[order[0]] : 0.0;
    const double zero_tol = sigma_max > 0.0 ? sigma_max * 1e-13 * static_cast<double>(std::max(m, k))
                                            : 0.0;

    std::vector<bool> is_set(k, false);
    std::vector<std::size_t> null_cols;
    for (std::size_t jj = 0; jj < k; ++jj) {
        const std::size_t src = order[jj];
        out.singular_values[jj] = sigma[src];
        for (std::size_t r = 0; r < k; ++r) out.right_vectors(r, jj) = v(r, src);
        if (sigma[src] > zero_tol && sigma[src] > 0.0) {
            for (std::size_t r = 0; r < m; ++r) out.left_vectors(r, jj) = w(r, src) / sigma[src];
            is_set[jj] = true;
        } else {
            null_cols.push_back(jj);
        }
    }

    // Null directions: complete U to an orthonormal frame so U^T U = I holds
    // regardless of rank. Reconstruction is unaffected (paired values are ~0).
    for (std::size_t jj : null_cols) {
        double best_norm = -1.0;
        Vector best_col;
        for (std::size_t cand = 0; cand < m; ++cand) {
            Vector col(m, 0.0);
            col[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t q = 0; q < k; ++q) {
                    if (!is_set[q]) continue;
                    double proj = 0.0;
                    for (std::size_t r = 0; r < m; ++r) proj += out.left_vectors(r, q) * col[r];
                    for (std::size_t r = 0; r < m; ++r) col[r] -= proj * out.left_vectors(r, q);
                }
            }
            const double n2 = norm2(col);
            if (n2 > best_norm) {
                best_norm = n2;
                best_col = col;
            }
            if (n2 > 0.5) break; // good enough, keeps the scan deterministic and short
        }
        if (best_norm <= 0.0) {
            throw NumericalError("thin_svd: failed to complete orthonormal basis for " + dims(m, k));
        }
        for (std::size_t r = 0; r < m; ++r) out.left_vectors(r, jj) = best_col[r] / best_norm;
        out.singular_values[jj] = std::max(out.singular_values[jj], 0.0);
        is_set[jj] = true;
    }

    return out;
}

std::pair<double, double> extreme_singular_values(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw ValidationError("extreme_singular_values: empty matrix " + dims(a.rows(), a.cols()));
    }
    const ThinSvd svd = a.rows() >= a.cols() ? thin_svd(a) : thin_svd(transpose(a));
    return {svd.singular_values.back(), svd.singular_values.front()};
}

DenseMatrix orthonormal_complement(const DenseMatrix& u) {
    const std::size_t m = u.rows();
    const std::size_t k = u.cols();
    if (k > m) throw ValidationError("orthonormal_complement: more columns than rows");

    DenseMatrix comp(m, m - k);
    std::size_t filled = 0;
    for (std::size_t cand = 0; cand < m && filled < m - k; ++cand) {
        Vector col(m, 0.0);
        col[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t q = 0; q < k; ++q) {
                double proj = 0.0;
                for (std::size_t r = 0; r < m; ++r) proj += u(r, q) * col[r];
                for (std::size_t r = 0; r < m; ++r) col[r] -= proj * u(r, q);
            }
            for (std::size_t q = 0; q < filled; ++q) {
                double proj = 0.0;
                for (std::size_t r = 0; r < m; ++r) proj += comp(r, q) * col[r];
                for (std::size_t r = 0; r < m; ++r) col[r] -= proj * comp(r, q);
            }
        }
        const double n2 = norm2(col);
        if (n2 > 1e-8) {
            for (std::size_t r = 0; r < m; ++r) comp(r, filled) = col[r] / n2;
            ++filled;
        }
    }
    if (filled != m - k) {
        throw NumericalError("orthonormal_complement: basis completion failed for " + dims(m, k));
    }
    return comp;
}

} // namespace bgmap
