#include "dcsat/attack.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dcsat/io.hpp"
#include "dcsat/rng.hpp"
#include "dcsat/trustregion.hpp"

namespace dcsat::attack {

namespace {

// Copy of the generator with the mask folded into the last layer, so query
// forwards produce the m sensed coordinates directly.
GeneratorNet masked_net(const GeneratorNet& net, const SamplingMatrix& phi) {
    GeneratorNet out = net;
    auto& last = out.layers.back();
    last.w = sensing::compose(phi, last.w);
    last.b = sensing::apply(phi, last.b);
    return out;
}

} // namespace

AttackResult omni_attack(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                         const Vec& y, double eps, std::size_t n_queries, std::uint64_t seed) {
    if (n_queries < 1) throw std::invalid_argument("omni_attack: n_queries must be >= 1");
    if (phi.ambient_dim != net.output_dim())
        throw std::invalid_argument("omni_attack: mask dimension != generator output");

    const std::size_t k = net.input_dim();
    const GeneratorNet mnet = masked_net(net, phi);

    // floor: unperturbed residual
    Vec base = network::evaluate(mnet, z);
    double floor = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - base[i];
        floor += d * d;
    }

    auto gen = rng::stream(seed, "attack");
    AttackResult res;
    res.queries = n_queries;

    double best = -1.0;
    Vec best_dir(k, 0.0);

    const std::size_t block = 256;
    std::size_t done = 0;
    linalg::DenseMatrix zs(k, block);
    std::vector<Vec> dirs(block);
    while (done < n_queries) {
        const std::size_t b = std::min(block, n_queries - done);
        if (zs.cols != b) zs = linalg::DenseMatrix(k, b);
        for (std::size_t q = 0; q < b; ++q) {
            dirs[q] = gen.unit_vector(k);
            for (std::size_t i = 0; i < k; ++i) zs(i, q) = z[i] + eps * dirs[q][i];
        }
        linalg::DenseMatrix outs = network::forward_batch(mnet, zs);
        for (std::size_t q = 0; q < b; ++q) {
            double r = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double d = y[i] - outs(i, q);
                r += d * d;
            }
            if (r > best) {
                best = r;
                best_dir = dirs[q];
            }
        }
        done += b;
    }

    res.best_delta_z.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) res.best_delta_z[i] = eps * best_dir[i];
    res.risk = std::max(best, floor);
    res.linearized_value = losses::exact_adv_risk(net, phi, z, y, eps);
    return res;
}

EvalSummary evaluate_model(const GeneratorNet& net, const SamplingMatrix& phi,
                           const data::LatentSet& latents, const std::vector<Vec>& targets,
                           double eps, std::size_t n_queries, std::uint64_t seed) {
    if (latents.count() == 0) throw std::invalid_argument("evaluate_model: empty test set");
    if (latents.count() != targets.size())
        throw std::invalid_argument("evaluate_model: latents/targets count mismatch");

    EvalSummary s;
    s.per_sample.reserve(latents.count());
    for (std::size_t i = 0; i < latents.count(); ++i) {
        const std::uint64_t sample_seed = rng::stream(seed, "attack-sample", i).next();
        AttackResult r =
            omni_attack(net, phi, latents.z[i], targets[i], eps, n_queries, sample_seed);
        SampleEval se;
        se.attack_risk = r.risk;
        se.fit_loss = losses::fitting_loss_value(net, phi, latents.z[i], targets[i]);
        se.linearized_value = r.linearized_value;
        s.per_sample.push_back(se);
        s.adv_risk += se.attack_risk;
        s.fit_loss += se.fit_loss;
    }
    const double n = static_cast<double>(latents.count());
    s.adv_risk /= n;
    s.fit_loss /= n;
    s.total = s.adv_risk + s.fit_loss;
    return s;
}

std::string eval_csv(const EvalSummary& summary) {
    std::ostringstream ss;
    ss << "index,attack_risk,fit_loss,linearized_value\n";
    for (std::size_t i = 0; i < summary.per_sample.size(); ++i) {
        const auto& se = summary.per_sample[i];
        ss << i << ',' << io::dtos(se.attack_risk) << ',' << io::dtos(se.fit_loss) << ','
           << io::dtos(se.linearized_value) << '\n';
    }
    return ss.str();
}

} // namespace dcsat::attack
