#include "ksdist/bandit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ks::bandit {

std::vector<double> BanditInstance::context(std::size_t arm) const {
    const double* row = contexts.data() + arm * context_dim;
    return {row, row + context_dim};
}

double BanditInstance::best_prob() const {
    return *std::max_element(true_probs.begin(), true_probs.end());
}

BanditInstance generate_instance(std::size_t num_arms,
                                 std::size_t context_dim, int power,
                                 RandomSource& rng) {
    if (num_arms < 2 || context_dim < 1 || power < 1)
        throw std::invalid_argument(
            "generate_instance: require num_arms >= 2, context_dim >= 1, "
            "power >= 1");
    BanditInstance inst;
    inst.num_arms = num_arms;
    inst.context_dim = context_dim;
    inst.power = power;
    inst.weights.resize(context_dim);
    for (double& w : inst.weights)
        w = rng.normal();
    inst.contexts.resize(num_arms * context_dim);
    for (double& x : inst.contexts)
        x = rng.normal();

    std::vector<double> scores(num_arms);
    for (std::size_t k = 0; k < num_arms; ++k) {
        const double* row = inst.contexts.data() + k * context_dim;
        scores[k] = std::inner_product(row, row + context_dim,
                                       inst.weights.begin(), 0.0);
    }
    const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    inst.true_probs.resize(num_arms);
    for (std::size_t k = 0; k < num_arms; ++k) {
        const double normalized = (scores[k] - lo) / span;
        inst.true_probs[k] = std::pow(normalized, power);
    }
    return inst;
}

double bernoulli_log_lik(int r, UnitValue<double> z) {
    if (r != 0 && r != 1)
        throw std::domain_error("bernoulli_log_lik: require r in {0,1}");
    return r == 1 ? z.log() : z.log_complement();
}

LikContribution reparam_loglik(LogParams<double> p, UnitValue<double> u,
                               int reward) {
    if (reward != 0 && reward != 1)
        throw std::domain_error("reparam_loglik: require reward in {0,1}");
    const double a_inv = std::exp(-p.log_a);
    const double s = std::exp(-p.log_b) * u.log();  // log u^(1/b)
    const double w = log1mexp(s);                   // log(1 - u^(1/b))
    const double log_z = a_inv * w;

    // d log z / d log a = -w/a; d log z / d log b = s e^s / (a (1 - e^s)).
    const double dlz_dla = std::exp(-p.log_a + std::log(-w));
    const double dlz_dlb = -std::exp(-p.log_a + std::log(-s) + s - w);

    LikContribution out;
    out.sample_log = log_z;
    if (reward == 1) {
        out.log_lik = log_z;
        out.d_log_a = dlz_dla;
        out.d_log_b = dlz_dlb;
    } else {
        const double log_1mz = log1mexp(log_z);
        // d log(1-z) / d log z = -z/(1-z)
        const double factor = -std::exp(log_z - log_1mz);
        out.log_lik = log_1mz;
        out.d_log_a = factor * dlz_dla;
        out.d_log_b = factor * dlz_dlb;
    }
    return out;
}

std::size_t argmax_first(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best])
            best = i;
    return best;
}

VbeState::VbeState(const BanditInstance& instance, const VbeConfig& config,
                   RandomSource& rng) {
    nn::MlpConfig mc;
    mc.input_dim = instance.context_dim;
    mc.hidden_widths = config.hidden_widths;
    mc.output_dim = 2;  // (log a, log b)
    params_ = nn::init(mc, rng);
    pulled_.assign(instance.num_arms, 0);
}

namespace {

// Central finite difference of -KL(q || Beta prior) for the optional
// Beta-prior mode; the uniform-prior path uses analytic entropy_grads.
GradPair<double> neg_kl_grads(LogParams<double> p,
                              const BetaParams<double>& prior) {
    constexpr double h = 1e-6;
    GradPair<double> g;
    const double ha = h * std::max(1.0, std::abs(p.log_a));
    g.d_log_a = -(kl_to_beta<double>({p.log_a + ha, p.log_b}, prior) -
                  kl_to_beta<double>({p.log_a - ha, p.log_b}, prior)) /
                (2.0 * ha);
    const double hb = h * std::max(1.0, std::abs(p.log_b));
    g.d_log_b = -(kl_to_beta<double>({p.log_a, p.log_b + hb}, prior) -
                  kl_to_beta<double>({p.log_a, p.log_b - hb}, prior)) /
                (2.0 * hb);
    return g;
}

}  // namespace

std::pair<TraceRow, StepStats> VbeState::step(const BanditInstance& instance,
                                              const VbeConfig& config,
                                              RandomSource& rng) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t num_arms = instance.num_arms;

    // Encode every context and draw one posterior sample per arm.
    const std::vector<double> encoded =
        nn::forward(params_, instance.contexts, num_arms);
    std::vector<double> sampled_log(num_arms);
    double max_log_b = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < num_arms; ++k) {
        const LogParams<double> pk{encoded[2 * k], encoded[2 * k + 1]};
        max_log_b = std::max(max_log_b, pk.log_b);
        const auto u = UnitValue<double>::from_value(rng.unit<double>());
        sampled_log[k] = icdf_log_value(u, pk);
        if (std::isnan(sampled_log[k]))
            throw std::runtime_error("vbe_step: non-finite posterior sample");
    }
    const std::size_t arm = argmax_first(sampled_log);

    // Bernoulli reward from the hidden truth, then store the transition.
    const int reward = rng.unit<double>() < instance.true_probs[arm] ? 1 : 0;
    buffer_.push_back({instance.context(arm), arm, reward});
    if (!pulled_[arm]) {
        pulled_[arm] = 1;
        pulled_list_.push_back(arm);
    }

    // Minibatch of replay records (unbiased estimate of the full-buffer
    // sum), plus one prior-term row per pulled arm.
    const std::size_t buffer_n = buffer_.size();
    std::size_t m = config.minibatch == 0
                        ? buffer_n
                        : std::min<std::size_t>(config.minibatch, buffer_n);
    std::vector<std::size_t> picks(buffer_n);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (m < buffer_n) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(rng.unit<double>() *
                                             static_cast<double>(buffer_n - i));
            std::swap(picks[i], picks[std::min(j, buffer_n - 1)]);
        }
        picks.resize(m);
    }
    const double scale = static_cast<double>(buffer_n) / static_cast<double>(m);

    const std::size_t n_pulled = pulled_list_.size();
    const double beta_kl = config.beta_kl.mode == BetaKl::Mode::fixed
                               ? config.beta_kl.value
                               : 1.0 / static_cast<double>(n_pulled);

    const std::size_t rows = m + n_pulled;
    std::vector<double> batch(rows * instance.context_dim);
    for (std::size_t i = 0; i < m; ++i)
        std::copy_n(buffer_[picks[i]].context.data(), instance.context_dim,
                    batch.data() + i * instance.context_dim);
    for (std::size_t i = 0; i < n_pulled; ++i)
        std::copy_n(instance.contexts.data() +
                        pulled_list_[i] * instance.context_dim,
                    instance.context_dim,
                    batch.data() + (m + i) * instance.context_dim);

    nn::Tape tape;
    const std::vector<double> out = nn::forward(params_, batch, rows, &tape);
    std::vector<double> out_grads(rows * 2, 0.0);

    double lik_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const LogParams<double> pr{out[2 * i], out[2 * i + 1]};
        const auto u = UnitValue<double>::from_value(rng.unit<double>());
        const LikContribution c =
            reparam_loglik(pr, u, buffer_[picks[i]].reward);
        lik_sum += c.log_lik;
        out_grads[2 * i] = scale * c.d_log_a;
        out_grads[2 * i + 1] = scale * c.d_log_b;
    }
    lik_sum *= scale;

    double prior_sum = 0.0;
    for (std::size_t i = 0; i < n_pulled; ++i) {
        const std::size_t row = m + i;
        const LogParams<double> pk{out[2 * row], out[2 * row + 1]};
        GradPair<double> pg;
        if (config.beta_prior) {
            prior_sum += -kl_to_beta(pk, *config.beta_prior);
            pg = neg_kl_grads(pk, *config.beta_prior);
        } else {
            prior_sum += entropy(pk);
            pg = entropy_grads(pk);
        }
        out_grads[2 * row] = beta_kl * pg.d_log_a;
        out_grads[2 * row + 1] = beta_kl * pg.d_log_b;
    }

    const double elbo = lik_sum + beta_kl * prior_sum;
    if (!std::isfinite(elbo))
        throw std::runtime_error("vbe_step: non-finite objective");
    const std::vector<double> grads = nn::backward(params_, tape, out_grads);
    nn::sgd_step(params_, grads, config.learning_rate);  // rejects non-finite

    ++steps_done_;
    cum_regret_ += instance.best_prob() - instance.true_probs[arm];

    TraceRow row;
    row.step = steps_done_;
    row.arm = arm;
    row.reward = reward;
    row.inst_regret = instance.best_prob() - instance.true_probs[arm];
    row.cum_regret = cum_regret_;
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    StepStats stats;
    stats.elbo = elbo;
    stats.likelihood = lik_sum;
    stats.prior_term = beta_kl * prior_sum;
    stats.prior_terms = n_pulled;
    stats.records_used = m;
    stats.max_log_b = max_log_b;
    return {row, stats};
}

RunTrace run(const BanditInstance& instance, const VbeConfig& config,
             Policy policy, RandomSource& rng) {
    RunTrace trace;
    const double best = instance.best_prob();

    if (policy == Policy::random_uniform) {
        double cum = 0.0;
        for (std::size_t t = 1; t <= config.steps; ++t) {
            const auto t0 = std::chrono::steady_clock::now();
            std::size_t arm = static_cast<std::size_t>(
                rng.unit<double>() * static_cast<double>(instance.num_arms));
            arm = std::min(arm, instance.num_arms - 1);
            const int reward =
                rng.unit<double>() < instance.true_probs[arm] ? 1 : 0;
            cum += best - instance.true_probs[arm];
            TraceRow row;
            row.step = t;
            row.arm = arm;
            row.reward = reward;
            row.inst_regret = best - instance.true_probs[arm];
            row.cum_regret = cum;
            row.wall_seconds = std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
            trace.rows.push_back(row);
        }
        return trace;
    }

    VbeConfig effective = config;
    if (policy == Policy::greedy_no_entropy)
        effective.beta_kl = BetaKl{BetaKl::Mode::fixed, 0.0};

    VbeState state(instance, effective, rng);
    for (std::size_t t = 1; t <= effective.steps; ++t) {
        try {
            auto [row, stats] = state.step(instance, effective, rng);
            trace.rows.push_back(row);
            trace.stats.push_back(stats);
        } catch (const std::exception& e) {
            trace.aborted = true;
            trace.abort_step = t;
            trace.abort_reason = e.what();
            break;
        }
    }
    return trace;
}

}  // namespace ks::bandit
