#include "dcsat/trustregion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dcsat/rng.hpp"

namespace dcsat::trustregion {

namespace {

struct SecularTerms {
    Vec lambdas; // cluster representatives, decreasing
    Vec csq;     // summed c_i^2 per cluster
};

// Merge eigenvalues within 1e-10 relative; near-identical poles would
// otherwise cancel catastrophically in the sum.
SecularTerms cluster_terms(const Vec& lambdas, const Vec& coeffs) {
    SecularTerms t;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double li = lambdas[i];
        const double ci2 = coeffs[i] * coeffs[i];
        if (!t.lambdas.empty() && t.lambdas.back() - li <= 1e-10 * (1.0 + t.lambdas.back())) {
            t.csq.back() += ci2;
        } else {
            t.lambdas.push_back(li);
            t.csq.push_back(ci2);
        }
    }
    return t;
}

double phi_of(const SecularTerms& t, double mu, double eps) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
        if (t.lambdas[i] <= 0.0 || t.csq[i] == 0.0) continue;
        const double d = mu - t.lambdas[i];
        s += t.lambdas[i] * t.csq[i] / (d * d);
    }
    return s - eps * eps;
}

double phi_prime_of(const SecularTerms& t, double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.lambdas.size(); ++i) {
        if (t.lambdas[i] <= 0.0 || t.csq[i] == 0.0) continue;
        const double d = mu - t.lambdas[i];
        s += -2.0 * t.lambdas[i] * t.csq[i] / (d * d * d);
    }
    return s;
}

} // namespace

std::optional<double> secular_root(const Vec& lambdas, const Vec& coeffs, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("secular_root: eps must be positive");
    if (lambdas.size() != coeffs.size())
        throw std::invalid_argument("secular_root: lambdas/coeffs length mismatch");
    for (std::size_t i = 1; i < lambdas.size(); ++i)
        if (lambdas[i] > lambdas[i - 1])
            throw std::invalid_argument("secular_root: lambdas must be nonincreasing");

    SecularTerms t = cluster_terms(lambdas, coeffs);

    bool any = false;
    for (std::size_t i = 0; i < t.lambdas.size(); ++i)
        if (t.lambdas[i] > 0.0 && t.csq[i] > 0.0) any = true;
    if (!any) return std::nullopt; // constant objective along every pole

    const double lmax = t.lambdas.front();
    const double target = eps * eps;
    const double tol = 1e-12 * target;
    const double delta = 1e-12 * (1.0 + lmax);

    // phi decreases from its mu -> lmax+ limit toward -eps^2; no sign change
    // above the pole means the hard case.
    double lo = lmax + delta;
    if (phi_of(t, lo, eps) <= 0.0) {
        // the limit could still be above eps^2 yet the sampled point sits past
        // the root only when the root is within delta of the pole; treat as
        // hard-case-free only if phi is positive somewhere closer
        return std::nullopt;
    }

    // geometric expansion to bracket the root
    double hi = lo;
    double step = std::max(delta, 1e-6 * (1.0 + lmax));
    for (int i = 0; i < 200 && phi_of(t, hi, eps) > 0.0; ++i) {
        lo = hi;
        hi = lmax + step;
        step *= 2.0;
    }
    if (phi_of(t, hi, eps) > 0.0)
        throw std::runtime_error("secular_root: failed to bracket the root above lambda_max");

    // bisection to tighten, then safeguarded Newton
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi_of(t, mid, eps) > 0.0)
            lo = mid;
        else
            hi = mid;
    }

    double mu = 0.5 * (lo + hi);
    for (int i = 0; i < 100; ++i) {
        const double f = phi_of(t, mu, eps);
        if (std::abs(f) <= tol) return mu;
        if (f > 0.0)
            lo = mu;
        else
            hi = mu;
        const double fp = phi_prime_of(t, mu);
        double next = fp != 0.0 ? mu - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == mu) break;
        mu = next;
    }
    if (std::abs(phi_of(t, mu, eps)) > tol * 1e3)
        throw std::runtime_error("secular_root: Newton did not converge; bracket [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return mu;
}

TrustRegionSolution solve_inner_max(const DenseMatrix& p, const Vec& y_hat, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("solve_inner_max: eps must be positive");
    if (p.rows != y_hat.size())
        throw std::invalid_argument("solve_inner_max: y_hat length must equal rows of P");

    const std::size_t k = p.cols;
    TrustRegionSolution sol;
    sol.delta_z.assign(k, 0.0);

    bool zero = true;
    for (double x : p.data)
        if (x != 0.0) {
            zero = false;
            break;
        }
    if (zero) {
        sol.mu = 0.0;
        sol.value = linalg::norm2_squared(y_hat);
        return sol;
    }

    const linalg::SvdResult sv = linalg::svd(p);
    const std::size_t r = sv.singulars.size();
    Vec c(r, 0.0); // U^T y_hat
    for (std::size_t j = 0; j < r; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) s += sv.u(i, j) * y_hat[i];
        c[j] = s;
    }
    Vec lambdas(r);
    for (std::size_t j = 0; j < r; ++j) lambdas[j] = sv.singulars[j] * sv.singulars[j];
    const double lmax = lambdas.front();

    auto root = secular_root(lambdas, c, eps);

    double mu = 0.0;
    if (root.has_value()) {
        mu = *root;
        sol.hard_case = false;
        for (std::size_t j = 0; j < r; ++j) {
            const double factor = sv.singulars[j] * c[j] / (mu - lambdas[j]);
            for (std::size_t i = 0; i < k; ++i) sol.delta_z[i] -= sv.v(i, j) * factor;
        }
    } else {
        // no root above lambda_max: take the mu -> lambda_max limit and pad
        // along the top right-singular direction up to the boundary
        sol.hard_case = true;
        mu = lmax;
        // top-block coefficients are at the SVD noise floor (<= 1e-10 * ||y_hat||)
        // whenever we land here; the limit solution drops them
        for (std::size_t j = 0; j < r; ++j) {
            const bool top_block = (lmax - lambdas[j]) <= 1e-10 * (1.0 + lmax);
            if (top_block) continue;
            if (lambdas[j] <= 0.0 || c[j] == 0.0) continue;
            const double factor = sv.singulars[j] * c[j] / (mu - lambdas[j]);
            for (std::size_t i = 0; i < k; ++i) sol.delta_z[i] -= sv.v(i, j) * factor;
        }
        const double base = linalg::norm2_squared(sol.delta_z);
        const double pad = eps * eps > base ? std::sqrt(eps * eps - base) : 0.0;
        for (std::size_t i = 0; i < k; ++i) sol.delta_z[i] += pad * sv.v(i, 0);
    }

    sol.mu = mu;

    // residual value evaluated directly
    Vec pdz = linalg::matvec(p, sol.delta_z);
    double val = 0.0;
    for (std::size_t i = 0; i < y_hat.size(); ++i) {
        const double d = y_hat[i] - pdz[i];
        val += d * d;
    }
    sol.value = val;

    // KKT residuals
    Vec ptpd = linalg::matvec_transposed(p, pdz);
    Vec pty = linalg::matvec_transposed(p, y_hat);
    double st = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double ri = mu * sol.delta_z[i] - ptpd[i] + pty[i];
        st += ri * ri;
    }
    sol.kkt_stationarity = std::sqrt(st);
    sol.kkt_norm_gap = mu > 0.0 ? std::abs(linalg::norm2(sol.delta_z) - eps) : 0.0;
    return sol;
}

KktReport verify_kkt(const DenseMatrix& p, const Vec& y_hat, double eps,
                     const TrustRegionSolution& sol) {
    KktReport rep;
    Vec pdz = linalg::matvec(p, sol.delta_z);
    Vec ptpd = linalg::matvec_transposed(p, pdz);
    Vec pty = linalg::matvec_transposed(p, y_hat);
    double st = 0.0;
    for (std::size_t i = 0; i < sol.delta_z.size(); ++i) {
        const double ri = sol.mu * sol.delta_z[i] - ptpd[i] + pty[i];
        st += ri * ri;
    }
    rep.stationarity = std::sqrt(st);

    const DenseMatrix ptp = linalg::matmul(linalg::transpose(p), p);
    const double lmax = ptp.rows > 0 ? linalg::eigmax_sym(ptp) : 0.0;
    rep.psd_violation = std::max(0.0, lmax - sol.mu);
    rep.complementarity = std::abs(sol.mu * (eps - linalg::norm2(sol.delta_z)));
    return rep;
}

double closed_form_value(const DenseMatrix& p, const Vec& y_hat, double mu) {
    const linalg::SvdResult sv = linalg::svd(p);
    const std::size_t r = sv.singulars.size();
    const double lmax = r > 0 ? sv.singulars[0] * sv.singulars[0] : 0.0;
    if (!(mu > lmax))
        throw std::invalid_argument("closed_form_value: mu must exceed eigmax(P^T P)");

    double in_span = 0.0, csq_total = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
        double cj = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) cj += sv.u(i, j) * y_hat[i];
        const double lam = sv.singulars[j] * sv.singulars[j];
        const double ratio = mu / (mu - lam);
        in_span += cj * cj * ratio * ratio;
        csq_total += cj * cj;
    }
    // energy of y_hat orthogonal to the column span passes through unchanged
    const double out_of_span = std::max(0.0, linalg::norm2_squared(y_hat) - csq_total);
    return in_span + out_of_span;
}

double inner_max_value_from_spectrum(const Vec& lambdas, const Vec& coeffs,
                                     double out_of_span_sq, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("inner_max_value_from_spectrum: eps must be positive");
    double csq = 0.0;
    for (double c : coeffs) csq += c * c;
    bool zero = true;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        if (lambdas[i] > 0.0) zero = false;
    if (zero || lambdas.empty()) return csq + out_of_span_sq;

    auto root = secular_root(lambdas, coeffs, eps);
    const double lmax = lambdas.front();
    if (root.has_value()) {
        const double mu = *root;
        double v = out_of_span_sq;
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            const double ratio = mu / (mu - lambdas[j]);
            v += coeffs[j] * coeffs[j] * ratio * ratio;
        }
        return v;
    }
    // hard case: limit solution plus boundary padding along the top direction
    double v = out_of_span_sq;
    double base = 0.0;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const bool top_block = (lmax - lambdas[j]) <= 1e-10 * (1.0 + lmax);
        if (top_block || lambdas[j] <= 0.0) {
            v += coeffs[j] * coeffs[j];
            continue;
        }
        const double ratio = lmax / (lmax - lambdas[j]);
        v += coeffs[j] * coeffs[j] * ratio * ratio;
        base += lambdas[j] * coeffs[j] * coeffs[j] / ((lmax - lambdas[j]) * (lmax - lambdas[j]));
    }
    const double pad_sq = std::max(0.0, eps * eps - base);
    return v + pad_sq * lmax;
}

double oracle_inner_max(const DenseMatrix& p, const Vec& y_hat, double eps,
                        std::size_t restarts, std::uint64_t seed,
                        std::size_t iterations) {
    if (restarts < 1) throw std::invalid_argument("oracle_inner_max: restarts must be >= 1");
    const std::size_t k = p.cols;

    // stable ascent step from an induced-norm bound on 2 P^T P
    double row_abs_max = 0.0;
    {
        // ||P^T P||_1 <= ||P||_1 * ||P||_inf
        Vec colsum(p.cols, 0.0), rowsum(p.rows, 0.0);
        for (std::size_t i = 0; i < p.rows; ++i)
            for (std::size_t j = 0; j < p.cols; ++j) {
                const double a = std::abs(p(i, j));
                colsum[j] += a;
                rowsum[i] += a;
            }
        double n1 = 0.0, ninf = 0.0;
        for (double x : colsum) n1 = std::max(n1, x);
        for (double x : rowsum) ninf = std::max(ninf, x);
        row_abs_max = n1 * ninf;
    }
    if (row_abs_max == 0.0) return linalg::norm2_squared(y_hat);
    const double step = 0.45 / row_abs_max;

    auto gen = rng::stream(seed, "tr-oracle");
    double best = linalg::norm2_squared(y_hat); // dz = 0 is feasible
    for (std::size_t rs = 0; rs < restarts; ++rs) {
        Vec x = gen.unit_vector(k);
        for (auto& xi : x) xi *= eps;
        Vec next(k);
        for (std::size_t it = 0; it < iterations; ++it) {
            // gradient of ||y_hat - P x||^2 is 2 P^T P x - 2 P^T y_hat
            Vec px = linalg::matvec(p, x);
            for (std::size_t i = 0; i < px.size(); ++i) px[i] -= y_hat[i];
            Vec g = linalg::matvec_transposed(p, px); // = P^T(Px - y_hat)
            for (std::size_t i = 0; i < k; ++i) next[i] = x[i] + 2.0 * step * g[i];
            const double nn = linalg::norm2(next);
            if (nn > eps)
                for (auto& xi : next) xi *= eps / nn;
            double move = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                const double d = next[i] - x[i];
                move += d * d;
            }
            x = next;
            if (move <= 1e-26 * eps * eps) break;
        }
        Vec px = linalg::matvec(p, x);
        double v = 0.0;
        for (std::size_t i = 0; i < px.size(); ++i) {
            const double d = y_hat[i] - px[i];
            v += d * d;
        }
        best = std::max(best, v);
    }
    return best;
}

} // namespace dcsat::trustregion
