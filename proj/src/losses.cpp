#include "dcsat/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace dcsat::losses {

ValueAndGrads fitting_loss(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                           const Vec& y) {
    if (phi.ambient_dim != net.output_dim())
        throw std::invalid_argument("fitting_loss: mask dimension != generator output");
    if (y.size() != phi.kept())
        throw std::invalid_argument("fitting_loss: target length != kept coordinates");

    network::ForwardTrace trace = network::forward(net, z);
    Vec sensed = sensing::apply(phi, trace.output());
    Vec residual(y.size());
    double value = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        residual[i] = y[i] - sensed[i];
        value += residual[i] * residual[i];
    }
    for (auto& r : residual) r *= -2.0;
    Vec upstream = sensing::scatter(phi, residual);

    ValueAndGrads out;
    out.value = value;
    out.grads = network::param_gradients(net, trace, upstream);
    return out;
}

double fitting_loss_value(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                          const Vec& y) {
    Vec sensed = sensing::apply(phi, network::evaluate(net, z));
    double value = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - sensed[i];
        value += d * d;
    }
    return value;
}

namespace {

struct LinearizedInstance {
    DenseMatrix p;  // Phi J
    Vec y_hat;      // y - Phi G(z)
};

LinearizedInstance linearize(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                             const Vec& y) {
    LinearizedInstance inst;
    DenseMatrix j = network::jacobian_at(net, z);
    inst.p = sensing::compose(phi, j);
    Vec sensed = sensing::apply(phi, network::evaluate(net, z));
    inst.y_hat.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) inst.y_hat[i] = y[i] - sensed[i];
    return inst;
}

} // namespace

double exact_adv_risk(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                      const Vec& y, double eps) {
    LinearizedInstance inst = linearize(net, phi, z, y);
    return trustregion::solve_inner_max(inst.p, inst.y_hat, eps).value;
}

double surrogate_bound(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                       const Vec& y, double eps) {
    LinearizedInstance inst = linearize(net, phi, z, y);
    const double pnorm = linalg::operator_norm(inst.p).value;
    return 2.0 * linalg::norm2_squared(inst.y_hat) + 2.0 * pnorm * pnorm * eps * eps;
}

PenaltyGrad lipschitz_penalty(const DenseMatrix& w) {
    const std::size_t c = w.cols;
    DenseMatrix e = linalg::matmul(linalg::transpose(w), w); // W^T W
    for (auto& x : e.data) x = -x;
    for (std::size_t i = 0; i < c; ++i) e(i, i) += 1.0; // E = I - W^T W

    PenaltyGrad out;
    for (double x : e.data) out.value += x * x;
    out.grad = linalg::matmul(w, e);
    for (auto& x : out.grad.data) x *= -4.0;
    return out;
}

PenaltyGrad nullspace_penalty(const SamplingMatrix& phi, const DenseMatrix& w_last) {
    if (w_last.rows != phi.ambient_dim)
        throw std::invalid_argument("nullspace_penalty: last layer must have " +
                                    std::to_string(phi.ambient_dim) + " rows");
    const DenseMatrix pw = sensing::compose(phi, w_last);
    const linalg::OperatorNorm top = linalg::operator_norm(pw);

    PenaltyGrad out;
    out.value = top.value * top.value;
    out.grad = DenseMatrix(w_last.rows, w_last.cols);
    if (top.value == 0.0) return out;

    // deflate to estimate the runner-up singular value; skip the gradient at
    // near-crossings where sigma_1 is not differentiable
    DenseMatrix deflated = pw;
    for (std::size_t i = 0; i < pw.rows; ++i)
        for (std::size_t j = 0; j < pw.cols; ++j)
            deflated(i, j) -= top.value * top.u[i] * top.v[j];
    const double sigma2 = linalg::operator_norm(deflated).value;
    if (top.value - sigma2 <= 1e-8 * std::max(1.0, top.value)) return out;

    // d(sigma_1^2)/d(PW) = 2 sigma_1 u v^T, lifted back to the selected rows
    for (std::size_t j = 0; j < phi.kept(); ++j) {
        const std::size_t row = phi.selected[j];
        const double f = 2.0 * top.value * top.u[j];
        for (std::size_t cidx = 0; cidx < w_last.cols; ++cidx)
            out.grad(row, cidx) = f * top.v[cidx];
    }
    return out;
}

SurrogateBatch surrogate_training_loss(const GeneratorNet& net, const SamplingMatrix& phi,
                                       const std::vector<Vec>& zs, const std::vector<Vec>& ys,
                                       double eps, double lambda, double lipschitz_weight,
                                       double nullspace_weight) {
    if (zs.empty()) throw std::invalid_argument("surrogate_training_loss: empty batch");
    if (zs.size() != ys.size())
        throw std::invalid_argument("surrogate_training_loss: zs/ys length mismatch");
    if (!(lambda >= 0.0)) throw std::invalid_argument("surrogate_training_loss: lambda < 0");
    if (!(eps >= 0.0)) throw std::invalid_argument("surrogate_training_loss: eps < 0");

    SurrogateBatch out;
    out.grads = network::zero_gradients(net);
    const double fit_weight = 0.5 * (lambda + 1.0);

    for (std::size_t i = 0; i < zs.size(); ++i) {
        ValueAndGrads fit = fitting_loss(net, phi, zs[i], ys[i]);
        out.fitting_sum += fit.value;
        network::accumulate_gradients(out.grads, fit_weight, fit.grads);

        const DenseMatrix p = sensing::compose(phi, network::jacobian_at(net, zs[i]));
        const double pnorm = linalg::operator_norm(p).value;
        out.opnorm_sq_sum += pnorm * pnorm;
    }
    out.value = out.opnorm_sq_sum * eps * eps + fit_weight * out.fitting_sum;

    // operator-norm term trained through the layer proxies, once per sample
    const double batch = static_cast<double>(zs.size());
    const double pw = eps * eps * batch;
    if (pw > 0.0) {
        const std::size_t last = net.depth() - 1;
        for (std::size_t l = 0; l < last; ++l) {
            PenaltyGrad lp = lipschitz_penalty(net.layers[l].w);
            for (std::size_t idx = 0; idx < lp.grad.data.size(); ++idx)
                out.grads.layers[l].dw.data[idx] += pw * lipschitz_weight * lp.grad.data[idx];
        }
        PenaltyGrad np = nullspace_penalty(phi, net.layers[last].w);
        for (std::size_t idx = 0; idx < np.grad.data.size(); ++idx)
            out.grads.layers[last].dw.data[idx] += pw * nullspace_weight * np.grad.data[idx];
    }
    return out;
}

} // namespace dcsat::losses
