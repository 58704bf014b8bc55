#pragma once

#include <vector>

#include "dcsat/network.hpp"
#include "dcsat/sensing.hpp"
#include "dcsat/trustregion.hpp"

namespace dcsat::losses {

using linalg::DenseMatrix;
using linalg::Vec;
using network::GeneratorNet;
using sensing::SamplingMatrix;

// Scalar components of one evaluation. Penalty fields hold the raw
// (unweighted) values; total applies the active weights.
struct LossBreakdown {
    double fitting = 0.0;
    double adversarial = 0.0;
    double lipschitz_penalty = 0.0;
    double nullspace_penalty = 0.0;
    double total = 0.0;
};

struct ValueAndGrads {
    double value = 0.0;
    network::ParamGradients grads;
};

// ||y - Phi G(z)||^2 and its parameter gradients. The upstream direction is
// -2 (y - Phi G(z)) scattered back to ambient coordinates.
ValueAndGrads fitting_loss(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                           const Vec& y);

double fitting_loss_value(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                          const Vec& y);

// Worst-case sensed residual over the eps-ball, under the first-order model
// of the generator: trust-region value with P = Phi J_G(z), y_hat = y - Phi G(z).
double exact_adv_risk(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                      const Vec& y, double eps);

// 2 ||y_hat||^2 + 2 ||P||_op^2 eps^2; always an upper bound on the exact risk.
double surrogate_bound(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                       const Vec& y, double eps);

// ||I - W^T W||_F^2 pulls every singular value of W toward 1.
struct PenaltyGrad {
    double value = 0.0;
    DenseMatrix grad;
};

PenaltyGrad lipschitz_penalty(const DenseMatrix& w);

// ||Phi W||_op^2 for the last layer; pushes its column space toward the
// null space of the mask. Gradient via the top singular pair, lifted back to
// ambient rows. When the top two singular values are within 1e-8 the gradient
// is reported zero (subdifferential crossing; the caller skips the step).
PenaltyGrad nullspace_penalty(const SamplingMatrix& phi, const DenseMatrix& w_last);

// Summed per-sample surrogate objective:
//   sum_i ||Phi J(z_i)||_op^2 eps^2 + ((lambda+1)/2) ||y_i - Phi G(z_i)||^2.
// The value is exact (operator norms included); the returned gradients drive
// the operator-norm term through the layer penalties instead of
// differentiating through the SVD (weights are the caller's knobs).
struct SurrogateBatch {
    double value = 0.0;                  // the summed objective above
    double fitting_sum = 0.0;            // sum_i ||y_i - Phi G(z_i)||^2
    double opnorm_sq_sum = 0.0;          // sum_i ||Phi J(z_i)||_op^2
    network::ParamGradients grads;       // fitting part + weighted penalties
};

SurrogateBatch surrogate_training_loss(const GeneratorNet& net, const SamplingMatrix& phi,
                                       const std::vector<Vec>& zs, const std::vector<Vec>& ys,
                                       double eps, double lambda,
                                       double lipschitz_weight = 1.0,
                                       double nullspace_weight = 1.0);

} // namespace dcsat::losses
