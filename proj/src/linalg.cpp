#include "dcsat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dcsat/rng.hpp"

namespace dcsat::linalg {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2_squared(const Vec& a) { return dot(a, a); }
double norm2(const Vec& a) { return std::sqrt(norm2_squared(a)); }

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diag(const Vec& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: inner dimensions differ");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.data[k * b.cols];
            double* crow = &c.data[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Vec matvec(const DenseMatrix& a, const Vec& x) {
    if (a.cols != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* row = &a.data[i * a.cols];
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_transposed(const DenseMatrix& a, const Vec& x) {
    if (a.rows != x.size()) throw std::invalid_argument("matvec_transposed: dimension mismatch");
    Vec y(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* row = &a.data[i * a.cols];
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols; ++j) y[j] += row[j] * xi;
    }
    return y;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double x : a.data) s += x * x;
    return std::sqrt(s);
}

bool all_finite(const DenseMatrix& a) {
    for (double x : a.data) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

namespace {

// Orthonormalize `col` of u against columns [0, r) by repeated Gram-Schmidt,
// starting from unit basis candidates. Fills rank-deficient directions.
void complete_basis_column(DenseMatrix& u, std::size_t col) {
    const std::size_t m = u.rows;
    for (std::size_t cand = 0; cand < m; ++cand) {
        Vec w(m, 0.0);
        w[cand] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < u.cols; ++j) {
                if (j == col) continue;
                double p = 0.0;
                for (std::size_t i = 0; i < m; ++i) p += w[i] * u(i, j);
                for (std::size_t i = 0; i < m; ++i) w[i] -= p * u(i, j);
            }
        }
        double n = norm2(w);
        if (n > 1e-6) {
            for (std::size_t i = 0; i < m; ++i) u(i, col) = w[i] / n;
            return;
        }
    }
    throw std::runtime_error("svd: failed to complete orthonormal basis");
}

// One-sided Jacobi on a tall matrix (rows >= cols). Returns U (rows x cols),
// singulars (cols), V (cols x cols).
void jacobi_svd_tall(const DenseMatrix& a, DenseMatrix& u, Vec& sig, DenseMatrix& v) {
    const std::size_t m = a.rows, n = a.cols;
    DenseMatrix b = a;             // columns rotated in place
    v = DenseMatrix::identity(n);

    auto col_dot = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t r = 0; r < m; ++r) s += b(r, i) * b(r, j);
        return s;
    };

    const double tol = 1e-15;
    const int max_sweeps = 60;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = col_dot(p, p);
                const double beta = col_dot(q, q);
                const double gamma = col_dot(p, q);
                if (gamma == 0.0) continue;
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < m; ++r) {
                    const double bp = b(r, p), bq = b(r, q);
                    b(r, p) = c * bp - s * bq;
                    b(r, q) = s * bp + c * bq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vp = v(r, p), vq = v(r, q);
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        }
    }
    if (!converged) {
        throw std::runtime_error("svd: one-sided Jacobi did not converge for " +
                                 std::to_string(m) + "x" + std::to_string(n) + " matrix");
    }

    sig.assign(n, 0.0);
    u = DenseMatrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        double nj = 0.0;
        for (std::size_t r = 0; r < m; ++r) nj += b(r, j) * b(r, j);
        nj = std::sqrt(nj);
        sig[j] = nj;
        if (nj > 0.0) {
            for (std::size_t r = 0; r < m; ++r) u(r, j) = b(r, j) / nj;
        }
    }

    // sort nonincreasing
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });
    DenseMatrix us(m, n), vs(n, n);
    Vec ss(n);
    for (std::size_t j = 0; j < n; ++j) {
        ss[j] = sig[order[j]];
        for (std::size_t r = 0; r < m; ++r) us(r, j) = u(r, order[j]);
        for (std::size_t r = 0; r < n; ++r) vs(r, j) = v(r, order[j]);
    }
    u = std::move(us);
    v = std::move(vs);
    sig = std::move(ss);

    for (std::size_t j = 0; j < n; ++j) {
        if (sig[j] == 0.0) complete_basis_column(u, j);
    }
}

} // namespace

SvdResult svd(const DenseMatrix& a) {
    if (a.rows == 0 || a.cols == 0) throw std::invalid_argument("svd: empty matrix");
    if (!all_finite(a)) throw std::invalid_argument("svd: non-finite entries");

    SvdResult res;
    if (a.rows >= a.cols) {
        jacobi_svd_tall(a, res.u, res.singulars, res.v);
    } else {
        // run on the transpose and swap factors
        DenseMatrix at = transpose(a);
        jacobi_svd_tall(at, res.v, res.singulars, res.u);
    }

    // sign convention: first nonzero component of each right singular vector
    // is nonnegative
    const std::size_t r = res.singulars.size();
    for (std::size_t j = 0; j < r; ++j) {
        double lead = 0.0;
        for (std::size_t i = 0; i < res.v.rows; ++i) {
            if (res.v(i, j) != 0.0) {
                lead = res.v(i, j);
                break;
            }
        }
        if (lead < 0.0) {
            for (std::size_t i = 0; i < res.v.rows; ++i) res.v(i, j) = -res.v(i, j);
            for (std::size_t i = 0; i < res.u.rows; ++i) res.u(i, j) = -res.u(i, j);
        }
    }
    return res;
}

OperatorNorm operator_norm(const DenseMatrix& a, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("operator_norm: tol must be positive");
    OperatorNorm out;
    out.u.assign(a.rows, 0.0);
    out.v.assign(a.cols, 0.0);
    if (a.rows > 0) out.u[0] = 1.0;
    if (a.cols > 0) out.v[0] = 1.0;

    double amax = 0.0;
    for (double x : a.data) amax = std::max(amax, std::abs(x));
    if (amax == 0.0) return out; // zero matrix

    // fixed internal seed keeps regression runs reproducible
    auto gen = rng::stream(0x5eedull, "power-iteration");
    Vec v = gen.unit_vector(a.cols);

    const int cap = 10000;
    double sigma_prev = -1.0;
    for (int it = 0; it < cap; ++it) {
        Vec av = matvec(a, v);
        Vec w = matvec_transposed(a, av);
        double wn = norm2(w);
        if (wn == 0.0) {
            // v landed in the null space; restart from another direction
            v = gen.unit_vector(a.cols);
            continue;
        }
        for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / wn;
        double sigma = std::sqrt(norm2(matvec(a, v)));
        if (it >= 10 && std::abs(sigma - sigma_prev) <= 0.01 * tol * (sigma + 1e-300)) {
            sigma_prev = sigma;
            break;
        }
        sigma_prev = sigma;
    }

    Vec av = matvec(a, v);
    double sigma = norm2(av);
    out.value = sigma;
    out.v = v;
    if (sigma > 0.0) {
        out.u = av;
        for (auto& x : out.u) x /= sigma;
    }
    return out;
}

Vec eig_sym(const DenseMatrix& s) {
    if (s.rows != s.cols) throw std::invalid_argument("eig_sym: matrix not square");
    const std::size_t n = s.rows;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-10)
                throw std::invalid_argument("eig_sym: matrix not symmetric within 1e-10");

    DenseMatrix a = s;
    // symmetrize exactly so rotations preserve symmetry bit-for-bit
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        double diag = 0.0;
        for (std::size_t i = 0; i < n; ++i) diag += a(i, i) * a(i, i);
        if (off <= 1e-30 * (diag + 1e-300)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }

    Vec eigs(n);
    for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i);
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    return eigs;
}

double eigmax_sym(const DenseMatrix& s) { return eig_sym(s).front(); }

} // namespace dcsat::linalg
