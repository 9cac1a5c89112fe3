#include "healthguard/mlp.hpp"

#include "healthguard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hg {
namespace {

// Activations of every layer for one input; acts[0] is the input itself.
// Hidden layers hold post-ReLU values, the last holds softmax probabilities.
void forward_all(const Mlp& net, std::span<const double> x, std::vector<std::vector<double>>& acts) {
    acts.resize(net.layers.size() + 1);
    acts[0].assign(x.begin(), x.end());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const DenseLayer& layer = net.layers[l];
        const auto& in = acts[l];
        auto& out = acts[l + 1];
        out.resize(layer.outputs);
        for (std::size_t o = 0; o < layer.outputs; ++o) {
            const double* w = layer.weights.data() + o * layer.inputs;
            double z = layer.bias[o];
            for (std::size_t i = 0; i < layer.inputs; ++i) z += w[i] * in[i];
            out[o] = z;
        }
        const bool last = l + 1 == net.layers.size();
        if (!last) {
            for (auto& v : out) v = v > 0.0 ? v : 0.0;
        } else {
            const double m = *std::max_element(out.begin(), out.end());
            double sum = 0.0;
            for (auto& v : out) {
                v = std::exp(v - m);
                sum += v;
            }
            for (auto& v : out) v /= sum;
        }
    }
}

MlpGradients zero_like(const Mlp& net) {
    MlpGradients g;
    for (const auto& layer : net.layers) {
        g.weights.emplace_back(layer.weights.size(), 0.0);
        g.bias.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

}  // namespace

Mlp Mlp::init(std::span<const std::size_t> sizes, Rng& rng) {
    if (sizes.size() < 2) throw ConfigError("network needs at least an input and an output layer");
    Mlp net;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        if (sizes[l] == 0 || sizes[l + 1] == 0) throw ConfigError("layer sizes must be positive");
        DenseLayer layer;
        layer.inputs = sizes[l];
        layer.outputs = sizes[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        std::uniform_real_distribution<double> u(-limit, limit);
        layer.weights.resize(layer.inputs * layer.outputs);
        for (auto& w : layer.weights) w = u(rng);
        layer.bias.assign(layer.outputs, 0.0);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
    if (x.size() != inputs()) throw ContractError("network input dimension mismatch");
    std::vector<std::vector<double>> acts;
    forward_all(*this, x, acts);
    return acts.back();
}

double cross_entropy(const Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels,
                     std::span<const std::uint32_t> rows) {
    if (rows.empty()) throw ContractError("cross-entropy over an empty batch");
    std::vector<std::vector<double>> acts;
    double loss = 0.0;
    for (auto r : rows) {
        forward_all(net, x.row(r), acts);
        loss -= std::log(std::max(acts.back()[labels[r]], 1e-300));
    }
    return loss / static_cast<double>(rows.size());
}

MlpGradients ann_gradients(const Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels,
                           std::span<const std::uint32_t> rows) {
    if (rows.empty()) throw ContractError("gradient over an empty batch");
    if (x.cols != net.inputs()) throw ContractError("network input dimension mismatch");
    MlpGradients g = zero_like(net);
    std::vector<std::vector<double>> acts;
    std::vector<double> delta;
    std::vector<double> prev_delta;
    const std::size_t n_layers = net.layers.size();

    for (auto r : rows) {
        forward_all(net, x.row(r), acts);
        // softmax + cross-entropy: dL/dz = p - onehot
        delta = acts.back();
        delta[labels[r]] -= 1.0;
        for (std::size_t l = n_layers; l-- > 0;) {
            const DenseLayer& layer = net.layers[l];
            const auto& in = acts[l];
            auto& gw = g.weights[l];
            auto& gb = g.bias[l];
            for (std::size_t o = 0; o < layer.outputs; ++o) {
                gb[o] += delta[o];
                double* row = gw.data() + o * layer.inputs;
                for (std::size_t i = 0; i < layer.inputs; ++i) row[i] += delta[o] * in[i];
            }
            if (l == 0) break;
            prev_delta.assign(layer.inputs, 0.0);
            for (std::size_t o = 0; o < layer.outputs; ++o) {
                const double* w = layer.weights.data() + o * layer.inputs;
                for (std::size_t i = 0; i < layer.inputs; ++i) prev_delta[i] += w[i] * delta[o];
            }
            for (std::size_t i = 0; i < layer.inputs; ++i)
                if (!(in[i] > 0.0)) prev_delta[i] = 0.0;  // ReLU'
            delta.swap(prev_delta);
        }
    }
    const double scale = 1.0 / static_cast<double>(rows.size());
    for (auto& v : g.weights)
        for (auto& w : v) w *= scale;
    for (auto& v : g.bias)
        for (auto& b : v) b *= scale;
    return g;
}

TrainTrace train_sgd(Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels, const SgdParams& params,
                     Rng& rng) {
    if (x.rows == 0) throw ConfigError("cannot train on an empty dataset");
    if (params.batch == 0) throw ConfigError("batch size must be positive");
    std::vector<std::uint32_t> order(x.rows);
    std::iota(order.begin(), order.end(), 0u);

    TrainTrace trace;
    trace.initial_loss = cross_entropy(net, x, labels, order);

    MlpGradients velocity = zero_like(net);
    for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += params.batch) {
            const std::size_t len = std::min<std::size_t>(params.batch, order.size() - start);
            const auto g = ann_gradients(net, x, labels, std::span(order).subspan(start, len));
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                auto& layer = net.layers[l];
                for (std::size_t i = 0; i < layer.weights.size(); ++i) {
                    velocity.weights[l][i] = params.momentum * velocity.weights[l][i] - params.learning_rate * g.weights[l][i];
                    layer.weights[i] += velocity.weights[l][i];
                }
                for (std::size_t i = 0; i < layer.bias.size(); ++i) {
                    velocity.bias[l][i] = params.momentum * velocity.bias[l][i] - params.learning_rate * g.bias[l][i];
                    layer.bias[i] += velocity.bias[l][i];
                }
            }
        }
    }
    std::iota(order.begin(), order.end(), 0u);
    trace.final_loss = cross_entropy(net, x, labels, order);
    return trace;
}

}  // namespace hg
