#include "dcsat/network.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dcsat/io.hpp"
#include "dcsat/rng.hpp"

namespace dcsat::network {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
    }
    throw std::logic_error("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    if (name == "leaky_relu") return Activation::leaky_relu;
    throw std::invalid_argument("unknown activation name: " + name);
}

double activate(Activation a, double x, double alpha) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Activation::tanh: return std::tanh(x);
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::leaky_relu: return x > 0.0 ? x : alpha * x;
    }
    throw std::logic_error("unknown activation");
}

double activate_prime(Activation a, double x, double alpha) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::sigmoid: {
            double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 - s);
        }
        case Activation::tanh: {
            double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::leaky_relu: return x > 0.0 ? 1.0 : alpha;
    }
    throw std::logic_error("unknown activation");
}

void GeneratorNet::validate() const {
    if (layers.empty()) throw std::invalid_argument("net has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].out_dim() < 1 || layers[l].in_dim() < 1)
            throw std::invalid_argument("layer " + std::to_string(l) + " has empty dimension");
        if (layers[l].b.size() != layers[l].out_dim())
            throw std::invalid_argument("layer " + std::to_string(l) + " bias length mismatch");
        if (l > 0 && layers[l].in_dim() != layers[l - 1].out_dim())
            throw std::invalid_argument("layer dimensions do not chain at layer " +
                                        std::to_string(l));
    }
}

GeneratorNet make_net(const std::vector<std::size_t>& dims,
                      const std::vector<Activation>& acts, std::uint64_t seed) {
    if (dims.size() < 2) throw std::invalid_argument("make_net: need at least one layer");
    if (acts.size() != dims.size() - 1)
        throw std::invalid_argument("make_net: one activation per layer required");
    GeneratorNet net;
    net.init_seed = seed;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.w = DenseMatrix(dims[l + 1], dims[l]);
        layer.b.assign(dims[l + 1], 0.0);
        layer.act = acts[l];
        const double bound =
            std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
        auto gen = rng::stream(seed, "init", l);
        for (auto& w : layer.w.data) w = (2.0 * gen.uniform01() - 1.0) * bound;
        net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
}

ForwardTrace forward(const GeneratorNet& net, const Vec& z) {
    if (z.size() != net.input_dim())
        throw std::invalid_argument("forward: expected input of length " +
                                    std::to_string(net.input_dim()) + ", got " +
                                    std::to_string(z.size()));
    ForwardTrace t;
    t.input = z;
    t.pre_activations.reserve(net.depth());
    t.post_activations.reserve(net.depth());
    const Vec* h = &z;
    for (const auto& layer : net.layers) {
        Vec a = linalg::matvec(layer.w, *h);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += layer.b[i];
        Vec post(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            post[i] = activate(layer.act, a[i], layer.leaky_alpha);
        t.pre_activations.push_back(std::move(a));
        t.post_activations.push_back(std::move(post));
        h = &t.post_activations.back();
    }
    return t;
}

Vec evaluate(const GeneratorNet& net, const Vec& z) {
    if (z.size() != net.input_dim())
        throw std::invalid_argument("evaluate: input length mismatch");
    Vec h = z;
    for (const auto& layer : net.layers) {
        Vec a = linalg::matvec(layer.w, h);
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = activate(layer.act, a[i] + layer.b[i], layer.leaky_alpha);
        h = std::move(a);
    }
    return h;
}

DenseMatrix forward_batch(const GeneratorNet& net, const DenseMatrix& zs) {
    if (zs.rows != net.input_dim())
        throw std::invalid_argument("forward_batch: expected " +
                                    std::to_string(net.input_dim()) + " rows");
    DenseMatrix h = zs;
    for (const auto& layer : net.layers) {
        DenseMatrix a = linalg::matmul(layer.w, h);
        for (std::size_t i = 0; i < a.rows; ++i) {
            double* row = &a.data[i * a.cols];
            const double bi = layer.b[i];
            for (std::size_t j = 0; j < a.cols; ++j)
                row[j] = activate(layer.act, row[j] + bi, layer.leaky_alpha);
        }
        h = std::move(a);
    }
    return h;
}

DenseMatrix jacobian_at(const GeneratorNet& net, const Vec& z) {
    ForwardTrace t = forward(net, z);
    // J = D^H W^H ... D^1 W^1, built left-to-right as (D^l W^l) * J_partial
    DenseMatrix j; // starts as D^1 W^1
    for (std::size_t l = 0; l < net.depth(); ++l) {
        const auto& layer = net.layers[l];
        const Vec& pre = t.pre_activations[l];
        DenseMatrix dw = layer.w;
        for (std::size_t i = 0; i < dw.rows; ++i) {
            const double d = activate_prime(layer.act, pre[i], layer.leaky_alpha);
            double* row = &dw.data[i * dw.cols];
            for (std::size_t c = 0; c < dw.cols; ++c) row[c] *= d;
        }
        j = (l == 0) ? std::move(dw) : linalg::matmul(dw, j);
    }
    return j;
}

DenseMatrix finite_diff_jacobian(const GeneratorNet& net, const Vec& z, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_jacobian: h must be positive");
    DenseMatrix j(net.output_dim(), net.input_dim());
    Vec zp = z, zm = z;
    for (std::size_t c = 0; c < net.input_dim(); ++c) {
        zp[c] = z[c] + h;
        zm[c] = z[c] - h;
        Vec fp = evaluate(net, zp);
        Vec fm = evaluate(net, zm);
        for (std::size_t r = 0; r < net.output_dim(); ++r)
            j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
        zp[c] = z[c];
        zm[c] = z[c];
    }
    return j;
}

ParamGradients param_gradients(const GeneratorNet& net, const ForwardTrace& trace,
                               const Vec& upstream) {
    if (upstream.size() != net.output_dim())
        throw std::invalid_argument("param_gradients: upstream length " +
                                    std::to_string(upstream.size()) + " != output dim " +
                                    std::to_string(net.output_dim()));
    if (trace.pre_activations.size() != net.depth() || trace.input.size() != net.input_dim())
        throw std::invalid_argument("param_gradients: trace does not match net");

    ParamGradients g;
    g.layers.resize(net.depth());

    Vec delta = upstream; // gradient w.r.t. post-activation of current layer
    for (std::size_t li = net.depth(); li-- > 0;) {
        const auto& layer = net.layers[li];
        const Vec& pre = trace.pre_activations[li];
        if (pre.size() != layer.out_dim())
            throw std::invalid_argument("param_gradients: stale trace at layer " +
                                        std::to_string(li));
        // through the activation
        for (std::size_t i = 0; i < delta.size(); ++i)
            delta[i] *= activate_prime(layer.act, pre[i], layer.leaky_alpha);

        const Vec& input = li == 0 ? trace.input : trace.post_activations[li - 1];
        LayerGrads& lg = g.layers[li];
        lg.dw = DenseMatrix(layer.out_dim(), layer.in_dim());
        for (std::size_t i = 0; i < layer.out_dim(); ++i) {
            const double di = delta[i];
            double* row = &lg.dw.data[i * lg.dw.cols];
            for (std::size_t jc = 0; jc < layer.in_dim(); ++jc) row[jc] = di * input[jc];
        }
        lg.db = delta;
        delta = linalg::matvec_transposed(layer.w, delta);
    }
    g.input = std::move(delta);
    return g;
}

ParamGradients zero_gradients(const GeneratorNet& net) {
    ParamGradients g;
    g.layers.resize(net.depth());
    for (std::size_t l = 0; l < net.depth(); ++l) {
        g.layers[l].dw = DenseMatrix(net.layers[l].out_dim(), net.layers[l].in_dim());
        g.layers[l].db.assign(net.layers[l].out_dim(), 0.0);
    }
    g.input.assign(net.input_dim(), 0.0);
    return g;
}

void accumulate_gradients(ParamGradients& dst, double scale, const ParamGradients& src) {
    if (dst.layers.size() != src.layers.size())
        throw std::invalid_argument("accumulate_gradients: layer count mismatch");
    for (std::size_t l = 0; l < dst.layers.size(); ++l) {
        auto& d = dst.layers[l];
        const auto& s = src.layers[l];
        for (std::size_t i = 0; i < d.dw.data.size(); ++i) d.dw.data[i] += scale * s.dw.data[i];
        for (std::size_t i = 0; i < d.db.size(); ++i) d.db[i] += scale * s.db[i];
    }
    for (std::size_t i = 0; i < dst.input.size() && i < src.input.size(); ++i)
        dst.input[i] += scale * src.input[i];
}

void save_net(const GeneratorNet& net, std::ostream& os) {
    os << "dcsat-net 1\n";
    os << "layers " << net.depth() << " input " << net.input_dim() << " seed " << net.init_seed
       << '\n';
    for (const auto& layer : net.layers) {
        os << "layer " << layer.out_dim() << ' ' << layer.in_dim() << ' '
           << activation_name(layer.act);
        if (layer.act == Activation::leaky_relu) os << ' ' << io::dtos(layer.leaky_alpha);
        os << '\n';
        for (std::size_t i = 0; i < layer.w.data.size(); ++i) {
            os << io::dtos(layer.w.data[i]);
            os << ((i + 1) % layer.in_dim() == 0 ? '\n' : ' ');
        }
        for (std::size_t i = 0; i < layer.b.size(); ++i) {
            if (i) os << ' ';
            os << io::dtos(layer.b[i]);
        }
        os << '\n';
    }
}

void save_net_file(const GeneratorNet& net, const std::string& path) {
    std::ostringstream ss;
    save_net(net, ss);
    io::atomic_write_file(path, ss.str());
}

GeneratorNet load_net(std::istream& is) {
    std::string magic;
    int version = 0;
    if (!(is >> magic >> version) || magic != "dcsat-net" || version != 1)
        throw std::runtime_error("load_net: bad checkpoint header");
    std::string kw;
    std::size_t depth = 0, input = 0;
    std::uint64_t seed = 0;
    if (!(is >> kw >> depth) || kw != "layers")
        throw std::runtime_error("load_net: expected 'layers <H>'");
    if (!(is >> kw >> input) || kw != "input")
        throw std::runtime_error("load_net: expected 'input <k>'");
    if (!(is >> kw >> seed) || kw != "seed")
        throw std::runtime_error("load_net: expected 'seed <s>'");

    GeneratorNet net;
    net.init_seed = seed;
    for (std::size_t l = 0; l < depth; ++l) {
        std::size_t out = 0, in = 0;
        std::string act;
        if (!(is >> kw >> out >> in >> act) || kw != "layer")
            throw std::runtime_error("load_net: malformed layer header at layer " +
                                     std::to_string(l));
        DenseLayer layer;
        layer.act = activation_from_name(act);
        if (layer.act == Activation::leaky_relu) {
            std::string alpha;
            if (!(is >> alpha)) throw std::runtime_error("load_net: missing leaky alpha");
            layer.leaky_alpha = io::stod_strict(alpha);
        }
        layer.w = DenseMatrix(out, in);
        std::string tok;
        for (auto& x : layer.w.data) {
            if (!(is >> tok)) throw std::runtime_error("load_net: truncated weights");
            x = io::stod_strict(tok);
        }
        layer.b.resize(out);
        for (auto& x : layer.b) {
            if (!(is >> tok)) throw std::runtime_error("load_net: truncated biases");
            x = io::stod_strict(tok);
        }
        net.layers.push_back(std::move(layer));
    }
    net.validate();
    if (net.input_dim() != input) throw std::runtime_error("load_net: input dim mismatch");
    return net;
}

GeneratorNet load_net_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
    return load_net(is);
}

} // namespace dcsat::network
