#include "dcsat/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dcsat/io.hpp"
#include "dcsat/rng.hpp"
#include "dcsat/trustregion.hpp"

namespace dcsat::training {

namespace {

double get_num(const std::map<std::string, std::string>& kv, const std::string& key,
               double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : io::stod_strict(it->second);
}

std::uint64_t get_u64(const std::map<std::string, std::string>& kv, const std::string& key,
                      std::uint64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return static_cast<std::uint64_t>(std::stoull(it->second));
}

} // namespace

TrainConfig config_from_map(const std::map<std::string, std::string>& kv) {
    TrainConfig cfg;
    cfg.lambda = get_num(kv, "lambda", cfg.lambda);
    cfg.eps = get_num(kv, "eps", cfg.eps);
    cfg.sr = get_num(kv, "sr", cfg.sr);
    cfg.seed = get_u64(kv, "seed", cfg.seed);
    cfg.learning_rate = get_num(kv, "learning_rate", cfg.learning_rate);
    cfg.epochs = static_cast<std::size_t>(get_u64(kv, "epochs", cfg.epochs));
    cfg.batch_size = static_cast<std::size_t>(get_u64(kv, "batch_size", cfg.batch_size));
    cfg.lipschitz_weight = get_num(kv, "lipschitz_weight", cfg.lipschitz_weight);
    cfg.nullspace_weight = get_num(kv, "nullspace_weight", cfg.nullspace_weight);
    auto it = kv.find("optimizer");
    if (it != kv.end()) {
        if (it->second == "sgd")
            cfg.optimizer = Optimizer::sgd;
        else if (it->second == "sgd_momentum")
            cfg.optimizer = Optimizer::sgd_momentum;
        else
            throw std::runtime_error("unknown optimizer: " + it->second);
    }
    cfg.momentum_beta = get_num(kv, "momentum_beta", cfg.momentum_beta);
    cfg.early_stop_patience =
        static_cast<std::size_t>(get_u64(kv, "early_stop_patience", cfg.early_stop_patience));
    cfg.monitor_count = static_cast<std::size_t>(get_u64(kv, "monitor_count", cfg.monitor_count));
    cfg.attack_queries =
        static_cast<std::size_t>(get_u64(kv, "attack_queries", cfg.attack_queries));
    cfg.eps_ratio = get_num(kv, "eps_ratio", cfg.eps_ratio);
    return cfg;
}

std::string config_to_text(const TrainConfig& cfg) {
    std::ostringstream ss;
    ss << "lambda=" << io::dtos(cfg.lambda) << '\n';
    ss << "eps=" << io::dtos(cfg.eps) << '\n';
    ss << "sr=" << io::dtos(cfg.sr) << '\n';
    ss << "seed=" << cfg.seed << '\n';
    ss << "learning_rate=" << io::dtos(cfg.learning_rate) << '\n';
    ss << "epochs=" << cfg.epochs << '\n';
    ss << "batch_size=" << cfg.batch_size << '\n';
    ss << "lipschitz_weight=" << io::dtos(cfg.lipschitz_weight) << '\n';
    ss << "nullspace_weight=" << io::dtos(cfg.nullspace_weight) << '\n';
    ss << "optimizer=" << (cfg.optimizer == Optimizer::sgd ? "sgd" : "sgd_momentum") << '\n';
    ss << "momentum_beta=" << io::dtos(cfg.momentum_beta) << '\n';
    ss << "early_stop_patience=" << cfg.early_stop_patience << '\n';
    ss << "monitor_count=" << cfg.monitor_count << '\n';
    ss << "attack_queries=" << cfg.attack_queries << '\n';
    ss << "eps_ratio=" << io::dtos(cfg.eps_ratio) << '\n';
    return ss.str();
}

std::string history_csv(const TrainHistory& h) {
    std::ostringstream ss;
    ss << "epoch,split,fitting,adversarial,lipschitz_penalty,nullspace_penalty,total\n";
    for (std::size_t e = 0; e < h.epochs.size(); ++e) {
        const auto emit = [&](const char* split, const losses::LossBreakdown& b) {
            ss << e << ',' << split << ',' << io::dtos(b.fitting) << ','
               << io::dtos(b.adversarial) << ',' << io::dtos(b.lipschitz_penalty) << ','
               << io::dtos(b.nullspace_penalty) << ',' << io::dtos(b.total) << '\n';
        };
        emit("train", h.epochs[e].train);
        emit("test", h.epochs[e].test);
    }
    return ss.str();
}

std::string records_csv(const std::vector<AblationRecord>& records) {
    std::ostringstream ss;
    ss << "method,lambda,sr,adv_risk,fit_loss,total,seed,eps\n";
    for (const auto& r : records) {
        ss << r.method << ',';
        if (r.lambda.has_value()) ss << io::dtos(*r.lambda);
        ss << ',' << io::dtos(r.sr) << ',';
        if (r.failed)
            ss << "fail," << io::dtos(r.fit_loss) << ',';
        else
            ss << io::dtos(r.adv_risk) << ',' << io::dtos(r.fit_loss) << ','
               << io::dtos(r.total);
        ss << ',' << r.seed << ',' << io::dtos(r.eps) << '\n';
    }
    return ss.str();
}

SampleSet sense_all(const SamplingMatrix& phi, const data::LatentSet& latents,
                    const data::Dataset& ds) {
    if (latents.count() != ds.count())
        throw std::invalid_argument("sense_all: latents/dataset count mismatch");
    SampleSet s;
    s.z = latents;
    s.y.reserve(ds.count());
    for (const auto& x : ds.x) s.y.push_back(sensing::apply(phi, x));
    return s;
}

namespace {

// Momentum buffers matching a net's parameters.
struct OptimizerState {
    std::vector<network::LayerGrads> velocity;

    explicit OptimizerState(const GeneratorNet& net) {
        velocity.resize(net.depth());
        for (std::size_t l = 0; l < net.depth(); ++l) {
            velocity[l].dw = linalg::DenseMatrix(net.layers[l].out_dim(), net.layers[l].in_dim());
            velocity[l].db.assign(net.layers[l].out_dim(), 0.0);
        }
    }

    void step(GeneratorNet& net, const network::ParamGradients& g, const TrainConfig& cfg) {
        const double lr = cfg.learning_rate;
        for (std::size_t l = 0; l < net.depth(); ++l) {
            auto& layer = net.layers[l];
            const auto& gl = g.layers[l];
            if (cfg.optimizer == Optimizer::sgd_momentum) {
                auto& v = velocity[l];
                for (std::size_t i = 0; i < v.dw.data.size(); ++i) {
                    v.dw.data[i] = cfg.momentum_beta * v.dw.data[i] + gl.dw.data[i];
                    layer.w.data[i] -= lr * v.dw.data[i];
                }
                for (std::size_t i = 0; i < v.db.size(); ++i) {
                    v.db[i] = cfg.momentum_beta * v.db[i] + gl.db[i];
                    layer.b[i] -= lr * v.db[i];
                }
            } else {
                for (std::size_t i = 0; i < layer.w.data.size(); ++i)
                    layer.w.data[i] -= lr * gl.dw.data[i];
                for (std::size_t i = 0; i < layer.b.size(); ++i) layer.b[i] -= lr * gl.db[i];
            }
        }
    }
};

std::vector<std::size_t> epoch_order(std::size_t count, std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    auto gen = rng::stream(seed, "batch", epoch);
    gen.shuffle(order);
    return order;
}

} // namespace

AutoencoderResult train_autoencoder_nets(const data::Dataset& ds, GeneratorNet encoder,
                                         GeneratorNet decoder, const TrainConfig& cfg) {
    if (ds.count() == 0) throw std::invalid_argument("train_autoencoder: empty dataset");
    encoder.validate();
    decoder.validate();
    if (encoder.input_dim() != ds.dim || decoder.output_dim() != ds.dim ||
        encoder.output_dim() != decoder.input_dim())
        throw std::invalid_argument("train_autoencoder: encoder/decoder dims do not match data");

    OptimizerState enc_state(encoder), dec_state(decoder);
    AutoencoderResult out;

    const std::size_t bs = std::max<std::size_t>(1, cfg.batch_size);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = epoch_order(ds.count(), cfg.seed, epoch);
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::size_t stop = std::min(order.size(), start + bs);
            auto enc_g = network::zero_gradients(encoder);
            auto dec_g = network::zero_gradients(decoder);
            const double scale = 1.0 / static_cast<double>(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                const Vec& x = ds.x[order[i]];
                auto enc_trace = network::forward(encoder, x);
                auto dec_trace = network::forward(decoder, enc_trace.output());
                Vec upstream(ds.dim);
                const Vec& xhat = dec_trace.output();
                for (std::size_t d = 0; d < ds.dim; ++d)
                    upstream[d] = -2.0 * (x[d] - xhat[d]);
                auto dg = network::param_gradients(decoder, dec_trace, upstream);
                auto eg = network::param_gradients(encoder, enc_trace, dg.input);
                network::accumulate_gradients(dec_g, scale, dg);
                network::accumulate_gradients(enc_g, scale, eg);
            }
            dec_state.step(decoder, dec_g, cfg);
            enc_state.step(encoder, enc_g, cfg);
        }

        // full train reconstruction loss after the epoch
        double loss = 0.0;
        for (const auto& x : ds.x) {
            Vec xhat = network::evaluate(decoder, network::evaluate(encoder, x));
            for (std::size_t d = 0; d < ds.dim; ++d) {
                const double diff = x[d] - xhat[d];
                loss += diff * diff;
            }
        }
        loss /= static_cast<double>(ds.count());
        if (!std::isfinite(loss))
            throw TrainingError("autoencoder diverged (non-finite loss) at epoch " +
                                std::to_string(epoch));
        out.epoch_loss.push_back(loss);

        if (cfg.early_stop_patience > 0 && out.epoch_loss.size() > cfg.early_stop_patience) {
            const std::size_t n = out.epoch_loss.size();
            const double best_before =
                *std::min_element(out.epoch_loss.begin(), out.epoch_loss.end() -
                                                              static_cast<std::ptrdiff_t>(
                                                                  cfg.early_stop_patience));
            const double best_recent =
                *std::min_element(out.epoch_loss.end() - static_cast<std::ptrdiff_t>(
                                                             cfg.early_stop_patience),
                                  out.epoch_loss.end());
            if (best_recent >= best_before && n >= cfg.early_stop_patience) break;
        }
    }

    out.latents.z.reserve(ds.count());
    for (const auto& x : ds.x) out.latents.z.push_back(network::evaluate(encoder, x));
    out.encoder = std::move(encoder);
    out.generator = std::move(decoder);
    return out;
}

AutoencoderResult train_autoencoder(const data::Dataset& ds,
                                    const std::vector<std::size_t>& encoder_dims,
                                    const TrainConfig& cfg) {
    if (encoder_dims.size() < 2 || encoder_dims.front() != ds.dim)
        throw std::invalid_argument("train_autoencoder: encoder dims must start at data dim");

    using network::Activation;
    std::vector<Activation> enc_acts(encoder_dims.size() - 1, Activation::sigmoid);
    enc_acts.back() = Activation::identity; // linear latent layer
    GeneratorNet encoder = network::make_net(encoder_dims, enc_acts, cfg.seed);

    std::vector<std::size_t> dec_dims(encoder_dims.rbegin(), encoder_dims.rend());
    std::vector<Activation> dec_acts(dec_dims.size() - 1, Activation::sigmoid);
    GeneratorNet decoder = network::make_net(dec_dims, dec_acts, cfg.seed + 1);

    return train_autoencoder_nets(ds, std::move(encoder), std::move(decoder), cfg);
}

namespace {

losses::LossBreakdown monitor_breakdown(const GeneratorNet& net, const SamplingMatrix& phi,
                                        const SampleSet& set, double eps,
                                        std::size_t monitor_count, double eff_lip,
                                        double eff_null) {
    losses::LossBreakdown b;
    const std::size_t n = std::min(monitor_count == 0 ? set.z.count() : monitor_count,
                                   set.z.count());
    for (std::size_t i = 0; i < n; ++i) {
        b.fitting += losses::fitting_loss_value(net, phi, set.z.z[i], set.y[i]);
        b.adversarial += losses::exact_adv_risk(net, phi, set.z.z[i], set.y[i], eps);
    }
    if (n > 0) {
        b.fitting /= static_cast<double>(n);
        b.adversarial /= static_cast<double>(n);
    }
    const std::size_t last = net.depth() - 1;
    for (std::size_t l = 0; l < last; ++l)
        b.lipschitz_penalty += losses::lipschitz_penalty(net.layers[l].w).value;
    b.nullspace_penalty = losses::nullspace_penalty(phi, net.layers[last].w).value;
    b.total = b.adversarial + b.fitting + eff_lip * b.lipschitz_penalty +
              eff_null * b.nullspace_penalty;
    return b;
}

FinetuneResult finetune_impl(const GeneratorNet& warm, const SamplingMatrix& phi,
                             const SampleSet& train, const SampleSet& test,
                             const TrainConfig& cfg, bool adversarial) {
    if (!(cfg.eps > 0.0))
        throw std::invalid_argument("finetune: eps must be positive (calibrate first)");
    if (train.z.count() == 0) throw std::invalid_argument("finetune: empty training set");
    if (train.z.count() != train.y.size() || test.z.count() != test.y.size())
        throw std::invalid_argument("finetune: latents/targets count mismatch");

    GeneratorNet net = warm;
    net.validate();
    const std::size_t last = net.depth() - 1;

    // penalty factor of the normalized batch objective
    const double pf = adversarial ? 2.0 * cfg.eps * cfg.eps / (cfg.lambda + 1.0) : 0.0;
    const double eff_lip = pf * cfg.lipschitz_weight;
    const double eff_null = pf * cfg.nullspace_weight;

    FinetuneResult out;
    OptimizerState state(net);

    double warm_risk = -1.0;
    const std::size_t bs = std::max<std::size_t>(1, cfg.batch_size);
    double best_fit = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto order = epoch_order(train.z.count(), cfg.seed, epoch);
        for (std::size_t start = 0; start < order.size(); start += bs) {
            const std::size_t stop = std::min(order.size(), start + bs);
            auto grads = network::zero_gradients(net);
            const double scale = 1.0 / static_cast<double>(stop - start);
            for (std::size_t i = start; i < stop; ++i) {
                const std::size_t s = order[i];
                auto fit = losses::fitting_loss(net, phi, train.z.z[s], train.y[s]);
                network::accumulate_gradients(grads, scale, fit.grads);
            }
            if (adversarial) {
                for (std::size_t l = 0; l < last; ++l) {
                    auto lp = losses::lipschitz_penalty(net.layers[l].w);
                    for (std::size_t idx = 0; idx < lp.grad.data.size(); ++idx)
                        grads.layers[l].dw.data[idx] += eff_lip * lp.grad.data[idx];
                }
                auto np = losses::nullspace_penalty(phi, net.layers[last].w);
                for (std::size_t idx = 0; idx < np.grad.data.size(); ++idx)
                    grads.layers[last].dw.data[idx] += eff_null * np.grad.data[idx];
            }
            state.step(net, grads, cfg);
        }

        EpochStats stats;
        stats.train = monitor_breakdown(net, phi, train, cfg.eps, cfg.monitor_count, eff_lip,
                                        eff_null);
        stats.test =
            monitor_breakdown(net, phi, test, cfg.eps, cfg.monitor_count, eff_lip, eff_null);
        stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.history.epochs.push_back(stats);

        if (!std::isfinite(stats.train.total) || !std::isfinite(stats.train.fitting)) {
            out.history.failed = true;
            out.history.fail_reason = "non-finite loss at epoch " + std::to_string(epoch);
            break;
        }
        if (warm_risk < 0.0) warm_risk = out.history.epochs.front().train.adversarial;
        if (warm_risk > 0.0 && stats.train.adversarial > 5.0 * warm_risk) {
            out.history.failed = true;
            out.history.fail_reason = "adversarial risk exceeded 5x warm start at epoch " +
                                      std::to_string(epoch);
            break;
        }

        if (cfg.early_stop_patience > 0) {
            if (stats.train.fitting < best_fit) {
                best_fit = stats.train.fitting;
                since_best = 0;
            } else if (++since_best >= cfg.early_stop_patience) {
                break;
            }
        }
    }

    out.net = std::move(net);
    return out;
}

} // namespace

FinetuneResult finetune_dcsat(const GeneratorNet& warm, const SamplingMatrix& phi,
                              const SampleSet& train, const SampleSet& test,
                              const TrainConfig& cfg) {
    if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
        throw std::invalid_argument("finetune_dcsat: lambda must be finite and >= 0");
    return finetune_impl(warm, phi, train, test, cfg, true);
}

FinetuneResult train_dcs_baseline(const GeneratorNet& warm, const SamplingMatrix& phi,
                                  const SampleSet& train, const SampleSet& test,
                                  const TrainConfig& cfg) {
    return finetune_impl(warm, phi, train, test, cfg, false);
}

namespace {

struct SampleSpectrum {
    Vec lambdas;
    Vec coeffs;
    double out_of_span_sq = 0.0;
    double fitting = 0.0;
};

SampleSpectrum spectrum_of(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                           const Vec& y) {
    SampleSpectrum s;
    const linalg::DenseMatrix p = sensing::compose(phi, network::jacobian_at(net, z));
    Vec sensed = sensing::apply(phi, network::evaluate(net, z));
    Vec y_hat(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y_hat[i] = y[i] - sensed[i];

    const linalg::SvdResult sv = linalg::svd(p);
    const std::size_t r = sv.singulars.size();
    s.lambdas.resize(r);
    s.coeffs.resize(r);
    double csq = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
        s.lambdas[j] = sv.singulars[j] * sv.singulars[j];
        double cj = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) cj += sv.u(i, j) * y_hat[i];
        s.coeffs[j] = cj;
        csq += cj * cj;
    }
    s.fitting = linalg::norm2_squared(y_hat);
    s.out_of_span_sq = std::max(0.0, s.fitting - csq);
    return s;
}

} // namespace

double calibrate_eps(const GeneratorNet& net, const SamplingMatrix& phi,
                     const SampleSet& samples, double target_ratio, std::size_t subsample) {
    if (!(target_ratio > 1.0))
        throw std::invalid_argument("calibrate_eps: target ratio must exceed 1");
    const std::size_t n = std::min(subsample, samples.z.count());
    if (n == 0) throw std::invalid_argument("calibrate_eps: empty sample set");

    std::vector<SampleSpectrum> spectra;
    spectra.reserve(n);
    double mean_fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        spectra.push_back(spectrum_of(net, phi, samples.z.z[i], samples.y[i]));
        mean_fit += spectra.back().fitting;
    }
    mean_fit /= static_cast<double>(n);
    if (mean_fit <= 0.0)
        throw std::invalid_argument("calibrate_eps: zero fitting loss, nothing to calibrate");

    auto mean_risk = [&](double eps) {
        double acc = 0.0;
        for (const auto& s : spectra)
            acc += trustregion::inner_max_value_from_spectrum(s.lambdas, s.coeffs,
                                                              s.out_of_span_sq, eps);
        return acc / static_cast<double>(n);
    };

    const double target = target_ratio * mean_fit;
    double lo = 1e-6, hi = 1e-6;
    // risk is nondecreasing in eps; expand until we straddle the target
    for (int i = 0; i < 200 && mean_risk(hi) < target; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    if (mean_risk(hi) < target)
        throw std::runtime_error("calibrate_eps: could not reach the target ratio");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (mean_risk(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<AblationRecord> ablation_sweep(const AblationInput& input,
                                           const std::vector<double>& lambdas,
                                           const std::vector<double>& srs,
                                           const TrainConfig& base) {
    if (lambdas.empty() || srs.empty())
        throw std::invalid_argument("ablation_sweep: lambda and sr lists must be nonempty");

    std::vector<AblationRecord> records;
    for (std::size_t si = 0; si < srs.size(); ++si) {
        const double sr = srs[si];
        const SamplingMatrix phi = sensing::make_sampler(input.train_x.dim, sr, base.seed);
        const SampleSet train = sense_all(phi, input.train_z, input.train_x);
        const SampleSet test = sense_all(phi, input.test_z, input.test_x);

        TrainConfig cfg = base;
        cfg.sr = sr;
        if (!(cfg.eps > 0.0)) cfg.eps = calibrate_eps(input.warm, phi, train, cfg.eps_ratio);

        const std::uint64_t eval_seed = rng::stream(base.seed, "eval-sr", si).next();

        auto run_one = [&](const std::string& method, std::optional<double> lambda) {
            TrainConfig rc = cfg;
            if (lambda.has_value()) rc.lambda = *lambda;
            FinetuneResult r =
                lambda.has_value() ? finetune_dcsat(input.warm, phi, train, test, rc)
                                   : train_dcs_baseline(input.warm, phi, train, test, rc);
            AblationRecord rec;
            rec.method = method;
            rec.lambda = lambda;
            rec.sr = sr;
            rec.seed = base.seed;
            rec.eps = rc.eps;
            if (r.history.failed) {
                rec.failed = true;
                if (!r.history.epochs.empty())
                    rec.fit_loss = r.history.epochs.back().test.fitting;
            } else {
                attack::EvalSummary ev = attack::evaluate_model(
                    r.net, phi, test.z, test.y, rc.eps, rc.attack_queries, eval_seed);
                rec.adv_risk = ev.adv_risk;
                rec.fit_loss = ev.fit_loss;
                rec.total = ev.total;
            }
            records.push_back(rec);
        };

        run_one("DCS", std::nullopt);
        for (double lambda : lambdas) run_one("DCSAT", lambda);
    }
    return records;
}

TightnessReport surrogate_tightness_check(const GeneratorNet& gen, const SamplingMatrix& phi,
                                          const SampleSet& samples, double eps,
                                          std::size_t steps, const TrainConfig& cfg) {
    if (!(eps > 0.0)) throw std::invalid_argument("surrogate_tightness_check: eps <= 0");
    TightnessReport rep;
    rep.steps = steps;

    const std::size_t n = std::min(cfg.monitor_count == 0 ? samples.z.count()
                                                          : cfg.monitor_count,
                                   samples.z.count());
    auto measure = [&](const GeneratorNet& net, double& risk, double& fit, double& sigma,
                       double& uty) {
        risk = fit = sigma = uty = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            SampleSpectrum s = spectrum_of(net, phi, samples.z.z[i], samples.y[i]);
            risk += trustregion::inner_max_value_from_spectrum(s.lambdas, s.coeffs,
                                                               s.out_of_span_sq, eps);
            fit += s.fitting;
            sigma += s.lambdas.empty() ? 0.0 : std::sqrt(s.lambdas.front());
            uty += linalg::norm2(s.coeffs);
        }
        const double dn = static_cast<double>(n);
        risk /= dn;
        fit /= dn;
        sigma /= dn;
        uty /= dn;
    };

    measure(gen, rep.risk_before, rep.fit_before, rep.sigma_before, rep.uty_before);

    TrainConfig rc = cfg;
    rc.eps = eps;
    rc.epochs = steps;
    rc.batch_size = samples.z.count(); // full-batch steps
    rc.monitor_count = 1;              // keep the inner monitoring cheap
    rc.early_stop_patience = 0;
    FinetuneResult r = finetune_dcsat(gen, phi, samples, samples, rc);

    measure(r.net, rep.risk_after, rep.fit_after, rep.sigma_after, rep.uty_after);
    rep.relative_reduction =
        rep.risk_before > 0.0 ? (rep.risk_before - rep.risk_after) / rep.risk_before : 0.0;
    return rep;
}

} // namespace dcsat::training
