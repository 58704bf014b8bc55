#pragma once

#include <cstddef>
#include <vector>

namespace dcsat::linalg {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm2_squared(const Vec& a);

// Dense row-major matrix of doubles. Everything in this project is small
// (at most a few hundred rows/columns), so no blocking or sparsity.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data; // rows*cols, row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diag(const Vec& d);
};

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
Vec matvec(const DenseMatrix& a, const Vec& x);
Vec matvec_transposed(const DenseMatrix& a, const Vec& x); // A^T x
double frobenius_norm(const DenseMatrix& a);
bool all_finite(const DenseMatrix& a);

// Thin SVD A = U diag(singulars) V^T with orthonormal columns in U and V and
// singular values sorted nonincreasing. Sign convention: the first nonzero
// component of each column of V is nonnegative.
struct SvdResult {
    DenseMatrix u;  // rows x r
    Vec singulars;  // r = min(rows, cols), nonincreasing, >= 0
    DenseMatrix v;  // cols x r
};

// One-sided Jacobi. Throws std::runtime_error (naming the dimensions) if the
// sweep cap is exceeded.
SvdResult svd(const DenseMatrix& a);

// Largest singular value by power iteration on A^T A, together with the top
// singular pair (u, v). Deterministic: the start vector comes from a fixed
// internal seed. A zero matrix yields value 0 and unit basis vectors.
struct OperatorNorm {
    double value = 0.0;
    Vec u; // length rows
    Vec v; // length cols
};

OperatorNorm operator_norm(const DenseMatrix& a, double tol = 1e-10);

// Full spectrum of a symmetric matrix by cyclic Jacobi; eigenvalues sorted
// nonincreasing. Used as the independent cross-check for svd and to bound the
// trust-region multiplier. Throws std::invalid_argument when the asymmetry
// exceeds 1e-10.
Vec eig_sym(const DenseMatrix& s);
double eigmax_sym(const DenseMatrix& s);

} // namespace dcsat::linalg
