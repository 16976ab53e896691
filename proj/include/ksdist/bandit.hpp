#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ksdist/distribution.hpp"
#include "ksdist/mlp.hpp"
#include "ksdist/random.hpp"

// Synthetic contextual Bernoulli bandit and the Variational Bandit Encoder:
// a shared MLP maps each arm context to Kumaraswamy posterior parameters
// over that arm's mean reward; Thompson sampling picks the arm with the
// largest reparameterized posterior draw; one ascent step per round on
//
//   L = sum_{(x_a, a, r) in D} log p(r | z~_a)
//       + beta_kl * sum_{k pulled} H[q(z_k | x_k)]
//
// with fresh reparameterized samples for the likelihood terms.

namespace ks::bandit {

struct BanditInstance {
    std::size_t num_arms = 0;
    std::size_t context_dim = 0;
    std::vector<double> contexts;    // num_arms x context_dim, row-major
    std::vector<double> weights;     // hidden weight vector, context_dim
    std::vector<double> true_probs;  // min-max normalized scores ^ power
    int power = 5;

    std::vector<double> context(std::size_t arm) const;
    double best_prob() const;
};

struct ReplayRecord {
    std::vector<double> context;
    std::size_t arm = 0;
    int reward = 0;  // {0, 1}
};

struct BetaKl {
    enum class Mode { inverse_pulled_arms, fixed };
    Mode mode = Mode::inverse_pulled_arms;
    double value = 1.0;  // used when mode == fixed
};

struct VbeConfig {
    std::size_t steps = 2000;
    double learning_rate = 1e-2;
    std::size_t minibatch = 256;  // records per update; 0 = full buffer
    BetaKl beta_kl{};
    // When set, the entropy term is replaced by -KL(q || Beta(prior)).
    std::optional<BetaParams<double>> beta_prior{};
    std::vector<std::size_t> hidden_widths{32, 32, 32};
};

enum class Policy { vbe_ks, random_uniform, greedy_no_entropy };

struct StepStats {
    double elbo = 0.0;
    double likelihood = 0.0;      // scaled minibatch estimate of the sum
    double prior_term = 0.0;      // beta_kl-weighted entropy (or -KL) sum
    std::size_t prior_terms = 0;  // number of pulled arms contributing
    std::size_t records_used = 0;
    double max_log_b = 0.0;  // posterior sharpness diagnostic
};

struct TraceRow {
    std::size_t step = 0;  // 1-based
    std::size_t arm = 0;
    int reward = 0;
    double inst_regret = 0.0;  // r* - true mean of the chosen arm
    double cum_regret = 0.0;
    double wall_seconds = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    std::vector<StepStats> stats;  // empty for the random policy
    bool aborted = false;
    std::size_t abort_step = 0;
    std::string abort_reason;
};

// Contexts and the hidden weight vector are standard normal; scores w.x are
// min-max normalized to [0, 1] and raised elementwise to `power`. Exactly
// one arm ends at probability 1 and one at 0.
BanditInstance generate_instance(std::size_t num_arms,
                                 std::size_t context_dim, int power,
                                 RandomSource& rng);

// r log z + (1 - r) log(1 - z), both terms read from log space.
double bernoulli_log_lik(int r, UnitValue<double> z);

// One likelihood contribution with gradients in (log a, log b), fused in
// log space through the inverse-CDF reparameterization. Equals
// (d loglik / d z~) * icdf_grads componentwise, without the intermediate
// exp round trips that overflow for sharp posteriors.
struct LikContribution {
    double log_lik = 0.0;
    double d_log_a = 0.0;
    double d_log_b = 0.0;
    double sample_log = 0.0;  // log z~
};
LikContribution reparam_loglik(LogParams<double> p, UnitValue<double> u,
                               int reward);

// Index of the first maximum (the specified tie rule: lowest arm wins).
std::size_t argmax_first(const std::vector<double>& values);

class VbeState {
  public:
    VbeState(const BanditInstance& instance, const VbeConfig& config,
             RandomSource& rng);

    // Runs one full round (encode, sample, select, reward, store, update).
    // Throws on any non-finite loss or gradient; callers that want a trace
    // instead of an exception use run().
    std::pair<TraceRow, StepStats> step(const BanditInstance& instance,
                                        const VbeConfig& config,
                                        RandomSource& rng);

    const nn::MlpParams& params() const { return params_; }
    nn::MlpParams& params() { return params_; }
    const std::vector<ReplayRecord>& buffer() const { return buffer_; }
    std::size_t pulled_count() const { return pulled_list_.size(); }

  private:
    nn::MlpParams params_;
    std::vector<ReplayRecord> buffer_;
    std::vector<char> pulled_;
    std::vector<std::size_t> pulled_list_;
    std::size_t steps_done_ = 0;
    double cum_regret_ = 0.0;
};

// Executes T steps of the chosen policy. Non-finite losses or gradients
// abort the run and are recorded on the trace, never patched over.
RunTrace run(const BanditInstance& instance, const VbeConfig& config,
             Policy policy, RandomSource& rng);

}  // namespace ks::bandit
