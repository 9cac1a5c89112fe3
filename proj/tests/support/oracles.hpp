#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "healthguard/metrics.hpp"
#include "healthguard/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace oracle {

struct Metrics {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
};

inline bool in_view(hg::ConditionLabel c, hg::View v) {
    return v == hg::View::All || (v == hg::View::BenignOnly) == hg::is_benign(c);
}

// Pair-by-pair counting over the rows whose truth falls in the view.
inline Metrics brute_force_metrics(std::span<const hg::ConditionLabel> pred, std::span<const hg::ConditionLabel> truth,
                                   hg::View view) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (in_view(truth[i], view)) rows.push_back(i);
    Metrics m;
    std::size_t correct = 0;
    for (auto i : rows) correct += pred[i] == truth[i];
    m.accuracy = double(correct) / double(rows.size());

    int classes = 0;
    for (std::size_t c = 0; c < hg::kLabelCount; ++c) {
        const auto label = hg::label_at(c);
        std::size_t tp = 0, fp = 0, fn = 0;
        for (auto i : rows) {
            if (truth[i] == label && pred[i] == label) ++tp;
            else if (truth[i] != label && pred[i] == label) ++fp;
            else if (truth[i] == label && pred[i] != label) ++fn;
        }
        if (tp + fn == 0) continue;  // class absent from the view's truth
        ++classes;
        const double p = tp + fp ? double(tp) / double(tp + fp) : 0.0;
        const double r = double(tp) / double(tp + fn);
        m.precision += p;
        m.recall += r;
        m.f1 += p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    }
    m.precision /= classes;
    m.recall /= classes;
    m.f1 /= classes;
    return m;
}

// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-6) over every
// parameter, numeric gradients from central differences.
inline double gradient_check(hg::Mlp net, const hg::Matrix& x, std::span<const std::uint8_t> y,
                             std::span<const std::uint32_t> rows, double h = 1e-5) {
    const auto g = hg::ann_gradients(net, x, y, rows);
    double worst = 0.0;
    auto check = [&](double& param, double analytic) {
        const double keep = param;
        param = keep + h;
        const double up = hg::cross_entropy(net, x, y, rows);
        param = keep - h;
        const double down = hg::cross_entropy(net, x, y, rows);
        param = keep;
        const double numeric = (up - down) / (2 * h);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        for (std::size_t i = 0; i < net.layers[l].weights.size(); ++i) check(net.layers[l].weights[i], g.weights[l][i]);
        for (std::size_t i = 0; i < net.layers[l].bias.size(); ++i) check(net.layers[l].bias[i], g.bias[l][i]);
    }
    return worst;
}

}  // namespace oracle
