#include "healthguard/errors.hpp"
#include "healthguard/mlp.hpp"
#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace hg;

namespace {

struct Toy {
    Matrix x;
    std::vector<std::uint8_t> y;
    std::vector<std::uint32_t> rows;
};

Toy toy(std::size_t n, std::size_t dim, std::size_t classes, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<std::size_t> c(0, classes - 1);
    Toy t{Matrix(n, dim), std::vector<std::uint8_t>(n), std::vector<std::uint32_t>(n)};
    for (auto& v : t.x.data) v = g(rng);
    for (auto& v : t.y) v = static_cast<std::uint8_t>(c(rng));
    std::iota(t.rows.begin(), t.rows.end(), 0u);
    return t;
}

double max_relative_error(const Mlp& net, const Toy& t) { return oracle::gradient_check(net, t.x, t.y, t.rows); }

}  // namespace

TEST(Mlp, InitShapeAndRange) {
    Rng rng(1);
    const std::size_t sizes[] = {20, 64, 15};
    const auto net = Mlp::init(sizes, rng);
    ASSERT_EQ(net.layers.size(), 2u);
    EXPECT_EQ(net.parameter_count(), 20u * 64 + 64 + 64 * 15 + 15);
    const double limit = std::sqrt(6.0 / (20 + 64));
    for (double w : net.layers[0].weights) EXPECT_LE(std::abs(w), limit);
    for (double b : net.layers[1].bias) EXPECT_EQ(b, 0.0);
}

TEST(Mlp, SoftmaxOutputs) {
    Rng rng(2);
    const std::size_t sizes[] = {4, 8, 5};
    auto net = Mlp::init(sizes, rng);
    const double x[] = {100.0, -50.0, 3.0, 0.0};
    const auto p = net.forward(x);
    double sum = 0;
    for (double v : p) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const double short_x[] = {1.0};
    EXPECT_THROW(net.forward(short_x), ContractError);
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
    const auto t = toy(12, 4, 3, 5);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const std::size_t sizes[] = {4, 2, 3};
        auto net = Mlp::init(sizes, rng);
        for (auto& l : net.layers)
            for (auto& b : l.bias) b = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
        EXPECT_LT(max_relative_error(net, t), 1e-4) << seed;
    }
}

TEST(Mlp, DeeperNetGradient) {
    const auto t = toy(8, 5, 4, 6);
    Rng rng(9);
    const std::size_t sizes[] = {5, 6, 4, 4};
    EXPECT_LT(max_relative_error(Mlp::init(sizes, rng), t), 1e-4);
}

// All weights and biases zero: softmax is uniform, so the output-bias gradient
// is 1/K minus the share of rows carrying each class.
TEST(Mlp, ZeroNetClosedForm) {
    auto t = toy(9, 4, 3, 7);
    t.y = {0, 0, 0, 0, 1, 1, 2, 2, 2};
    Rng rng(0);
    const std::size_t sizes[] = {4, 2, 3};
    auto net = Mlp::init(sizes, rng);
    for (auto& l : net.layers) {
        std::fill(l.weights.begin(), l.weights.end(), 0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
    const auto g = ann_gradients(net, t.x, t.y, t.rows);
    const double share[] = {4.0 / 9, 2.0 / 9, 3.0 / 9};
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(g.bias[1][c], 1.0 / 3 - share[c], 1e-15);
    EXPECT_NEAR(cross_entropy(net, t.x, t.y, t.rows), std::log(3.0), 1e-15);
}

TEST(Mlp, DuplicatedBatchSameGradient) {
    const auto t = toy(10, 4, 3, 8);
    Rng rng(4);
    const std::size_t sizes[] = {4, 5, 3};
    const auto net = Mlp::init(sizes, rng);
    std::vector<std::uint32_t> twice = t.rows;
    twice.insert(twice.end(), t.rows.begin(), t.rows.end());
    const auto a = ann_gradients(net, t.x, t.y, t.rows);
    const auto b = ann_gradients(net, t.x, t.y, twice);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        for (std::size_t i = 0; i < a.weights[l].size(); ++i) EXPECT_NEAR(a.weights[l][i], b.weights[l][i], 1e-14);
        for (std::size_t i = 0; i < a.bias[l].size(); ++i) EXPECT_NEAR(a.bias[l][i], b.bias[l][i], 1e-14);
    }
}

TEST(Mlp, TrainingReducesLoss) {
    const auto t = toy(50, 4, 3, 10);
    Rng rng(11);
    const std::size_t sizes[] = {4, 16, 3};
    auto net = Mlp::init(sizes, rng);
    const auto trace = train_sgd(net, t.x, t.y, SgdParams{0.01, 0.9, 200, 8}, rng);
    EXPECT_LT(trace.final_loss, trace.initial_loss);
}

TEST(Mlp, TrainingIsDeterministic) {
    const auto t = toy(40, 4, 3, 12);
    auto run = [&] {
        Rng rng(13);
        const std::size_t sizes[] = {4, 6, 3};
        auto net = Mlp::init(sizes, rng);
        train_sgd(net, t.x, t.y, SgdParams{0.05, 0.9, 5, 7}, rng);
        return net;
    };
    EXPECT_EQ(run(), run());
}
