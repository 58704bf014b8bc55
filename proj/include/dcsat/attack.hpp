#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcsat/data.hpp"
#include "dcsat/losses.hpp"
#include "dcsat/network.hpp"
#include "dcsat/sensing.hpp"

namespace dcsat::attack {

using linalg::Vec;
using network::GeneratorNet;
using sensing::SamplingMatrix;

struct AttackResult {
    Vec best_delta_z;              // norm eps
    double risk = 0.0;             // max sensed residual found (zero dir included)
    std::size_t queries = 0;
    double linearized_value = 0.0; // trust-region value at the same (z, y, eps)
};

// Empirical inner maximization: n_queries seeded directions uniform on the
// sphere, each scaled to radius eps, evaluated on the true (non-linearized)
// sensed residual. The unperturbed residual is always evaluated as a floor.
// Ties resolve to the lowest query index.
AttackResult omni_attack(const GeneratorNet& net, const SamplingMatrix& phi, const Vec& z,
                         const Vec& y, double eps, std::size_t n_queries, std::uint64_t seed);

struct SampleEval {
    double attack_risk = 0.0;
    double fit_loss = 0.0;
    double linearized_value = 0.0;
};

struct EvalSummary {
    double adv_risk = 0.0;  // mean attack risk over the test set
    double fit_loss = 0.0;  // mean unperturbed residual
    double total = 0.0;     // adv_risk + fit_loss
    std::vector<SampleEval> per_sample;
};

// Per-sample attack seeds derive from (seed, sample index) so results do not
// depend on evaluation order.
EvalSummary evaluate_model(const GeneratorNet& net, const SamplingMatrix& phi,
                           const data::LatentSet& latents, const std::vector<Vec>& targets,
                           double eps, std::size_t n_queries, std::uint64_t seed);

// CSV: header then one row per test sample
// (index, attack_risk, fit_loss, linearized_value)
std::string eval_csv(const EvalSummary& summary);

} // namespace dcsat::attack
