#pragma once

#include <cstdint>
#include <optional>

#include "dcsat/linalg.hpp"

namespace dcsat::trustregion {

using linalg::DenseMatrix;
using linalg::Vec;

// Result of maximizing f(dz) = ||y_hat - P dz||^2 over ||dz|| <= eps.
// The maximizer sits on the boundary whenever P != 0, with multiplier
// mu >= eigmax(P^T P).
struct TrustRegionSolution {
    Vec delta_z;
    double mu = 0.0;
    double value = 0.0;           // f at the maximizer
    double kkt_stationarity = 0.0; // ||(mu I - P^T P) dz + P^T y_hat||
    double kkt_norm_gap = 0.0;     // | ||dz|| - eps | when mu > 0
    bool hard_case = false;
};

// Boundary-multiplier equation: find mu in (lambda_max, inf) with
//   sum_i lambda_i c_i^2 / (mu - lambda_i)^2 = eps^2.
// `lambdas` are nonincreasing eigenvalues of P^T P, `coeffs` the components
// of U^T y_hat. Returns nullopt when no root exists above lambda_max (the
// hard case, handled by the caller). Eigenvalues within 1e-10 relative are
// merged before solving.
std::optional<double> secular_root(const Vec& lambdas, const Vec& coeffs, double eps);

// Closed-form solver: SVD of P, boundary multiplier from secular_root, and
// dz = -V diag(sigma_i / (mu - lambda_i)) U^T y_hat. Hard case pads the
// limit solution along the top right-singular direction to reach norm eps.
// P = 0 degenerates to dz = 0, mu = 0, value = ||y_hat||^2.
TrustRegionSolution solve_inner_max(const DenseMatrix& p, const Vec& y_hat, double eps);

struct KktReport {
    double stationarity = 0.0;       // ||(mu I - P^T P) dz + P^T y_hat||
    double psd_violation = 0.0;      // max(0, eigmax(P^T P) - mu)
    double complementarity = 0.0;    // |mu * (eps - ||dz||)|
};

KktReport verify_kkt(const DenseMatrix& p, const Vec& y_hat, double eps,
                     const TrustRegionSolution& sol);

// Maximum value as a spectral sum: sum_i c_i^2 mu^2/(mu - lambda_i)^2 plus
// the energy of y_hat outside the column span of P. Requires mu > lambda_max.
double closed_form_value(const DenseMatrix& p, const Vec& y_hat, double mu);

// Maximum value computed from a precomputed spectrum of P: eigenvalues
// lambda_i of P^T P (nonincreasing), coefficients c = U^T y_hat, and the
// energy of y_hat outside the column span. Lets callers sweep eps without
// refactorizing.
double inner_max_value_from_spectrum(const Vec& lambdas, const Vec& coeffs,
                                     double out_of_span_sq, double eps);

// Independent brute-force check: projected gradient ascent from seeded random
// starts on the eps-sphere. Never touches the SVD/secular path.
double oracle_inner_max(const DenseMatrix& p, const Vec& y_hat, double eps,
                        std::size_t restarts, std::uint64_t seed,
                        std::size_t iterations = 2000);

} // namespace dcsat::trustregion
