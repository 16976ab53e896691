#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ksdist/random.hpp"

// Minimal dense MLP with hand-written reverse-mode gradients, enough to
// realize the bandit encoder context -> (log a, log b). Double precision,
// leaky-ReLU hidden activations, no output nonlinearity (the distribution
// consumes unconstrained log parameters directly).

namespace ks::nn {

struct MlpConfig {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_widths;
    std::size_t output_dim = 0;
    double leaky_slope = 0.01;

    std::size_t layer_count() const { return hidden_widths.size() + 1; }
    std::size_t param_count() const;
    // Width of layer boundary i (0 = input .. layer_count() = output).
    std::size_t width(std::size_t i) const;
};

// Flat parameter block. Layout, layer by layer: weight matrix W (rows =
// outputs, row-major), then bias vector.
struct MlpParams {
    MlpConfig config;
    std::vector<double> values;
};

// Cached forward state for one batch; consumed by exactly one backward.
struct Tape {
    // activations[l]: input to layer l (batch x width(l)); preacts[l]:
    // pre-activation output of layer l.
    std::vector<std::vector<double>> activations;
    std::vector<std::vector<double>> preacts;
    std::size_t batch = 0;
    bool consumed = false;
};

// He-style init: W ~ N(0, 2/fan_in), biases 0, so the initial encoder maps
// everything near (log a, log b) = (0, 0) - a uniform posterior.
MlpParams init(const MlpConfig& config, RandomSource& rng);

// Batch forward; inputs is batch x input_dim row-major, returns batch x
// output_dim. Fills `tape` when given.
std::vector<double> forward(const MlpParams& params,
                            std::span<const double> inputs, std::size_t batch,
                            Tape* tape = nullptr);

// Reverse mode: output_grads holds d(scalar)/d(outputs) for the batch-summed
// scalar; returns gradients in parameter layout. Marks the tape consumed.
std::vector<double> backward(const MlpParams& params, Tape& tape,
                             std::span<const double> output_grads);

// Gradient-ascent step: params += learning_rate * grads. Rejects non-finite
// gradients before touching the parameters.
void sgd_step(MlpParams& params, std::span<const double> grads,
              double learning_rate);

// Text blob: header line with the config, then one value per line
// (round-trips doubles exactly via hex floats).
void save(const MlpParams& params, std::ostream& out);
MlpParams load(std::istream& in);

}  // namespace ks::nn
