#include "ksdist/mlp.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ks::nn {

namespace {

void check_config(const MlpConfig& c) {
    if (c.input_dim < 1 || c.output_dim < 1)
        throw std::invalid_argument("MlpConfig: dims must be >= 1");
    for (std::size_t w : c.hidden_widths)
        if (w < 1)
            throw std::invalid_argument("MlpConfig: dims must be >= 1");
}

}  // namespace

std::size_t MlpConfig::width(std::size_t i) const {
    if (i == 0)
        return input_dim;
    if (i <= hidden_widths.size())
        return hidden_widths[i - 1];
    return output_dim;
}

std::size_t MlpConfig::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < layer_count(); ++l)
        n += width(l + 1) * width(l) + width(l + 1);
    return n;
}

MlpParams init(const MlpConfig& config, RandomSource& rng) {
    check_config(config);
    MlpParams p;
    p.config = config;
    p.values.resize(config.param_count());
    std::size_t off = 0;
    for (std::size_t l = 0; l < config.layer_count(); ++l) {
        const std::size_t fan_in = config.width(l);
        const std::size_t fan_out = config.width(l + 1);
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (std::size_t i = 0; i < fan_out * fan_in; ++i)
            p.values[off++] = scale * rng.normal();
        for (std::size_t i = 0; i < fan_out; ++i)
            p.values[off++] = 0.0;
    }
    return p;
}

std::vector<double> forward(const MlpParams& params,
                            std::span<const double> inputs, std::size_t batch,
                            Tape* tape) {
    const MlpConfig& c = params.config;
    if (inputs.size() != batch * c.input_dim)
        throw std::invalid_argument("forward: input size != batch * input_dim");
    if (tape) {
        tape->activations.assign(c.layer_count(), {});
        tape->preacts.assign(c.layer_count(), {});
        tape->batch = batch;
        tape->consumed = false;
    }
    std::vector<double> act(inputs.begin(), inputs.end());
    std::size_t off = 0;
    for (std::size_t l = 0; l < c.layer_count(); ++l) {
        const std::size_t in_w = c.width(l);
        const std::size_t out_w = c.width(l + 1);
        const double* weight = params.values.data() + off;
        const double* bias = weight + out_w * in_w;
        std::vector<double> pre(batch * out_w);
        for (std::size_t r = 0; r < batch; ++r) {
            const double* in_row = act.data() + r * in_w;
            double* out_row = pre.data() + r * out_w;
            for (std::size_t o = 0; o < out_w; ++o) {
                double s = bias[o];
                const double* w_row = weight + o * in_w;
                for (std::size_t i = 0; i < in_w; ++i)
                    s += w_row[i] * in_row[i];
                out_row[o] = s;
            }
        }
        if (tape) {
            tape->activations[l] = act;
            tape->preacts[l] = pre;
        }
        const bool last = (l + 1 == c.layer_count());
        if (last) {
            act = std::move(pre);
        } else {
            act.resize(pre.size());
            for (std::size_t i = 0; i < pre.size(); ++i)
                act[i] = pre[i] > 0.0 ? pre[i] : c.leaky_slope * pre[i];
        }
        off += out_w * in_w + out_w;
    }
    return act;
}

std::vector<double> backward(const MlpParams& params, Tape& tape,
                             std::span<const double> output_grads) {
    const MlpConfig& c = params.config;
    if (tape.consumed)
        throw std::logic_error("backward: tape already consumed");
    if (output_grads.size() != tape.batch * c.output_dim)
        throw std::invalid_argument("backward: grad size != batch * output_dim");
    tape.consumed = true;

    std::vector<double> grads(params.values.size(), 0.0);
    std::vector<double> delta(output_grads.begin(), output_grads.end());

    // Offsets of each layer's block in the flat layout.
    std::vector<std::size_t> offsets(c.layer_count());
    std::size_t off = 0;
    for (std::size_t l = 0; l < c.layer_count(); ++l) {
        offsets[l] = off;
        off += c.width(l + 1) * c.width(l) + c.width(l + 1);
    }

    for (std::size_t l = c.layer_count(); l-- > 0;) {
        const std::size_t in_w = c.width(l);
        const std::size_t out_w = c.width(l + 1);
        const double* weight = params.values.data() + offsets[l];
        double* w_grad = grads.data() + offsets[l];
        double* b_grad = w_grad + out_w * in_w;
        const std::vector<double>& act = tape.activations[l];

        for (std::size_t r = 0; r < tape.batch; ++r) {
            const double* d_row = delta.data() + r * out_w;
            const double* a_row = act.data() + r * in_w;
            for (std::size_t o = 0; o < out_w; ++o) {
                const double d = d_row[o];
                b_grad[o] += d;
                double* wg_row = w_grad + o * in_w;
                for (std::size_t i = 0; i < in_w; ++i)
                    wg_row[i] += d * a_row[i];
            }
        }
        if (l == 0)
            break;
        // Propagate to the previous layer through W and the leaky-ReLU.
        std::vector<double> prev(tape.batch * in_w, 0.0);
        const std::vector<double>& pre_prev = tape.preacts[l - 1];
        for (std::size_t r = 0; r < tape.batch; ++r) {
            const double* d_row = delta.data() + r * out_w;
            double* p_row = prev.data() + r * in_w;
            for (std::size_t o = 0; o < out_w; ++o) {
                const double d = d_row[o];
                const double* w_row = weight + o * in_w;
                for (std::size_t i = 0; i < in_w; ++i)
                    p_row[i] += d * w_row[i];
            }
            const double* pre_row = pre_prev.data() + r * in_w;
            for (std::size_t i = 0; i < in_w; ++i)
                if (pre_row[i] <= 0.0)
                    p_row[i] *= c.leaky_slope;
        }
        delta = std::move(prev);
    }
    return grads;
}

void sgd_step(MlpParams& params, std::span<const double> grads,
              double learning_rate) {
    if (grads.size() != params.values.size())
        throw std::invalid_argument("sgd_step: gradient size mismatch");
    for (double g : grads)
        if (!std::isfinite(g))
            throw std::runtime_error("sgd_step: non-finite gradient");
    for (std::size_t i = 0; i < grads.size(); ++i)
        params.values[i] += learning_rate * grads[i];
}

void save(const MlpParams& params, std::ostream& out) {
    out << "ksdist-mlp v1 input=" << params.config.input_dim << " hidden=";
    for (std::size_t i = 0; i < params.config.hidden_widths.size(); ++i) {
        if (i)
            out << ',';
        out << params.config.hidden_widths[i];
    }
    out << " output=" << params.config.output_dim
        << " slope=" << std::hexfloat << params.config.leaky_slope << "\n";
    for (double v : params.values)
        out << std::hexfloat << v << "\n";
    out << std::defaultfloat;
}

MlpParams load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("ksdist-mlp v1 ", 0) != 0)
        throw std::runtime_error("mlp load: bad header");
    MlpConfig c;
    std::string token;
    std::istringstream hs(header.substr(14));
    while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("mlp load: bad header token " + token);
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "input") {
            c.input_dim = std::stoul(val);
        } else if (key == "output") {
            c.output_dim = std::stoul(val);
        } else if (key == "slope") {
            c.leaky_slope = std::strtod(val.c_str(), nullptr);
        } else if (key == "hidden") {
            std::istringstream vs(val);
            std::string piece;
            while (std::getline(vs, piece, ','))
                if (!piece.empty())
                    c.hidden_widths.push_back(std::stoul(piece));
        } else {
            throw std::runtime_error("mlp load: unknown header key " + key);
        }
    }
    MlpParams p;
    p.config = c;
    p.values.reserve(c.param_count());
    std::string line;
    while (p.values.size() < c.param_count() && std::getline(in, line))
        p.values.push_back(std::strtod(line.c_str(), nullptr));
    if (p.values.size() != c.param_count())
        throw std::runtime_error("mlp load: truncated parameter block");
    return p;
}

}  // namespace ks::nn
