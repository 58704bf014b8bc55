#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dcsat/linalg.hpp"

namespace dcsat::network {

using linalg::DenseMatrix;
using linalg::Vec;

enum class Activation { identity, sigmoid, tanh, relu, leaky_relu };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

double activate(Activation a, double x, double alpha);
// derivative at the pre-activation; relu'(0) is defined as 0
double activate_prime(Activation a, double x, double alpha);

struct DenseLayer {
    DenseMatrix w;      // out_dim x in_dim
    Vec b;              // out_dim
    Activation act = Activation::identity;
    double leaky_alpha = 0.01; // only used by leaky_relu

    std::size_t in_dim() const { return w.cols; }
    std::size_t out_dim() const { return w.rows; }
};

// Dense feedforward generator z (k) -> x (n).
struct GeneratorNet {
    std::vector<DenseLayer> layers;
    std::uint64_t init_seed = 0;

    std::size_t input_dim() const { return layers.front().in_dim(); }
    std::size_t output_dim() const { return layers.back().out_dim(); }
    std::size_t depth() const { return layers.size(); }

    void validate() const; // throws when consecutive dimensions do not chain
};

// Seeded uniform init in [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))],
// zero biases. `dims` lists k, hidden..., n; `acts` has one entry per layer.
GeneratorNet make_net(const std::vector<std::size_t>& dims,
                      const std::vector<Activation>& acts, std::uint64_t seed);

struct ForwardTrace {
    Vec input;                           // z
    std::vector<Vec> pre_activations;    // per layer
    std::vector<Vec> post_activations;   // per layer; back() is the output
    const Vec& output() const { return post_activations.back(); }
};

ForwardTrace forward(const GeneratorNet& net, const Vec& z);
Vec evaluate(const GeneratorNet& net, const Vec& z); // forward without the trace

// Column b of zs is one input; returns the matching columns of outputs.
// Used for bulk query evaluation in the attack loop.
DenseMatrix forward_batch(const GeneratorNet& net, const DenseMatrix& zs);

// Exact input Jacobian (n x k): chain product of activation-derivative
// diagonals and layer matrices at the traced pre-activations.
DenseMatrix jacobian_at(const GeneratorNet& net, const Vec& z);

// Central differences (G(z+h e_i) - G(z-h e_i)) / 2h; verification oracle.
DenseMatrix finite_diff_jacobian(const GeneratorNet& net, const Vec& z, double h);

struct LayerGrads {
    DenseMatrix dw;
    Vec db;
};

struct ParamGradients {
    std::vector<LayerGrads> layers;
    Vec input; // d<upstream, G(z)>/dz = J^T upstream
};

// Gradients of <upstream, G(z)> w.r.t. every weight, bias, and the input, by
// reverse accumulation through the trace.
ParamGradients param_gradients(const GeneratorNet& net, const ForwardTrace& trace,
                               const Vec& upstream);

ParamGradients zero_gradients(const GeneratorNet& net);
// dst += scale * src over every weight/bias/input entry
void accumulate_gradients(ParamGradients& dst, double scale, const ParamGradients& src);

// Checkpoint: textual header plus row-major weights/biases in shortest
// round-trip decimal, so save/load is bit-exact.
void save_net(const GeneratorNet& net, std::ostream& os);
void save_net_file(const GeneratorNet& net, const std::string& path);
GeneratorNet load_net(std::istream& is);
GeneratorNet load_net_file(const std::string& path);

} // namespace dcsat::network
