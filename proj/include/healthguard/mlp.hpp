#pragma once

// Multilayer perceptron: ReLU hidden layers, softmax output, mean
// cross-entropy loss, mini-batch SGD with momentum.

#include "healthguard/matrix.hpp"
#include "healthguard/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hg {

struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // outputs x inputs, row-major
    std::vector<double> bias;     // outputs

    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct Mlp {
    std::vector<DenseLayer> layers;

    /// Uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
    /// `sizes` = {inputs, hidden..., outputs}.
    static Mlp init(std::span<const std::size_t> sizes, Rng& rng);

    std::size_t inputs() const { return layers.front().inputs; }
    std::size_t outputs() const { return layers.back().outputs; }
    std::size_t parameter_count() const;

    /// Softmax probabilities.
    std::vector<double> forward(std::span<const double> x) const;

    friend bool operator==(const Mlp&, const Mlp&) = default;
};

/// Same shape as Mlp::layers; holds d(loss)/d(parameter).
struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};

/// Mean cross-entropy over `rows` of `x`.
double cross_entropy(const Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels,
                     std::span<const std::uint32_t> rows);

/// Backpropagated gradient of the mean cross-entropy over `rows`.
MlpGradients ann_gradients(const Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels,
                           std::span<const std::uint32_t> rows);

struct SgdParams {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::uint32_t epochs = 50;
    std::uint32_t batch = 32;
};

struct TrainTrace {
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Shuffles every epoch with `rng`; deterministic for a given rng state.
TrainTrace train_sgd(Mlp& net, const Matrix& x, std::span<const std::uint8_t> labels, const SgdParams& params,
                     Rng& rng);

}  // namespace hg
