#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcsat/attack.hpp"
#include "dcsat/data.hpp"
#include "dcsat/losses.hpp"
#include "dcsat/network.hpp"
#include "dcsat/sensing.hpp"

namespace dcsat::training {

using linalg::Vec;
using network::GeneratorNet;
using sensing::SamplingMatrix;

enum class Optimizer { sgd, sgd_momentum };

struct TrainConfig {
    double lambda = 2e4;
    double eps = 0.0;           // <= 0 requests calibration (see calibrate_eps)
    double sr = 0.8;
    std::uint64_t seed = 1;
    double learning_rate = 1.0;
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double lipschitz_weight = 1.0;  // multiplies eps^2 in the trained objective
    double nullspace_weight = 1.0;
    Optimizer optimizer = Optimizer::sgd_momentum;
    double momentum_beta = 0.9;
    std::size_t early_stop_patience = 0; // 0 disables early stopping

    std::size_t monitor_count = 32;   // samples per split for per-epoch breakdowns
    std::size_t attack_queries = 4096;
    double eps_ratio = 1.3;           // calibration target: adv risk / fitting
};

TrainConfig config_from_map(const std::map<std::string, std::string>& kv);
std::string config_to_text(const TrainConfig& cfg);

struct EpochStats {
    losses::LossBreakdown train;
    losses::LossBreakdown test;
    double seconds = 0.0; // wall time; in-memory only, not serialized
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    bool failed = false;
    std::string fail_reason;
};

// CSV without wall time so identical runs produce identical bytes.
std::string history_csv(const TrainHistory& h);

struct AblationRecord {
    std::string method;            // "DCS" or "DCSAT"
    std::optional<double> lambda;  // absent for DCS
    double sr = 0.0;
    double adv_risk = 0.0;
    double fit_loss = 0.0;
    double total = 0.0;            // adv_risk + fit_loss
    bool failed = false;
    std::uint64_t seed = 0;
    double eps = 0.0;
};

std::string records_csv(const std::vector<AblationRecord>& records);

// Latents paired with their sensed targets.
struct SampleSet {
    data::LatentSet z;
    std::vector<Vec> y;
};

SampleSet sense_all(const SamplingMatrix& phi, const data::LatentSet& latents,
                    const data::Dataset& ds);

struct AutoencoderResult {
    GeneratorNet encoder;
    GeneratorNet generator; // the decoder, used as the fine-tune warm start
    data::LatentSet latents;
    std::vector<double> epoch_loss; // mean reconstruction loss per epoch
};

// Mini-batch gradient descent on mean ||x - D(E(x))||^2. `encoder_dims` lists
// the encoder chain (e.g. 784, 100, 30); the decoder mirrors it. Hidden
// layers are sigmoid; the latent layer is linear; the output layer sigmoid.
// Throws TrainingError naming the epoch when the loss goes non-finite.
AutoencoderResult train_autoencoder(const data::Dataset& ds,
                                    const std::vector<std::size_t>& encoder_dims,
                                    const TrainConfig& cfg);

// Same loop with caller-supplied nets (warm starts, tests).
AutoencoderResult train_autoencoder_nets(const data::Dataset& ds, GeneratorNet encoder,
                                         GeneratorNet decoder, const TrainConfig& cfg);

struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FinetuneResult {
    GeneratorNet net;
    TrainHistory history;
};

// Fine-tunes the generator on the summed surrogate objective with the mask
// held constant. Per batch the step direction is
//   mean fitting gradient + (2 eps^2 / (lambda+1)) * weighted layer penalties,
// i.e. the batch objective scaled by 2/((lambda+1) B), which decouples the
// learning rate from lambda. Per-epoch breakdowns (including the exact
// linearized risk, monitoring only) are taken on the first monitor_count
// samples of each split. A run is marked failed when the monitored risk
// exceeds 5x its warm-start value or any loss goes non-finite.
FinetuneResult finetune_dcsat(const GeneratorNet& warm, const SamplingMatrix& phi,
                              const SampleSet& train, const SampleSet& test,
                              const TrainConfig& cfg);

// The same loop with every adversarial penalty disabled.
FinetuneResult train_dcs_baseline(const GeneratorNet& warm, const SamplingMatrix& phi,
                                  const SampleSet& train, const SampleSet& test,
                                  const TrainConfig& cfg);

// Bisects eps until mean linearized adversarial risk is target_ratio times
// the mean fitting loss on the warm start (per-sample spectra are computed
// once, so the search is cheap).
double calibrate_eps(const GeneratorNet& net, const SamplingMatrix& phi,
                     const SampleSet& samples, double target_ratio,
                     std::size_t subsample = 64);

struct AblationInput {
    GeneratorNet warm;
    data::Dataset train_x;
    data::Dataset test_x;
    data::LatentSet train_z;
    data::LatentSet test_z;
};

// One mask per (sr, seed). For each sr: DCS once, then DCSAT per lambda, each
// evaluated with the empirical attack on the test split. Failed runs are
// recorded and the sweep continues. Record order: srs as given, DCS first,
// then lambdas as given.
std::vector<AblationRecord> ablation_sweep(const AblationInput& input,
                                           const std::vector<double>& lambdas,
                                           const std::vector<double>& srs,
                                           const TrainConfig& base);

struct TightnessReport {
    std::size_t steps = 0;
    double risk_before = 0.0;
    double risk_after = 0.0;
    double relative_reduction = 0.0; // (before - after) / before
    double fit_before = 0.0;
    double fit_after = 0.0;
    double sigma_before = 0.0; // mean top singular value of P over the subset
    double sigma_after = 0.0;
    double uty_before = 0.0;   // mean || U^T y_hat ||
    double uty_after = 0.0;
};

// Runs `steps` full-batch surrogate gradient steps (lambda from cfg, intended
// large) and reports how the exact linearized risk and the spectrum of
// P = Phi J moved.
TightnessReport surrogate_tightness_check(const GeneratorNet& gen, const SamplingMatrix& phi,
                                          const SampleSet& samples, double eps,
                                          std::size_t steps, const TrainConfig& cfg);

} // namespace dcsat::training
