#include "healthguard/metrics.hpp"

#include "healthguard/errors.hpp"

#include <string>

namespace hg {
namespace {

bool in_view(ConditionLabel c, View v) {
    switch (v) {
        case View::All: return true;
        case View::BenignOnly: return is_benign(c);
        case View::MaliciousOnly: return is_malicious(c);
    }
    return false;
}

double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

std::string_view name(View v) {
    switch (v) {
        case View::All: return "All";
        case View::BenignOnly: return "Benign";
        case View::MaliciousOnly: return "Malicious";
    }
    return "?";
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

ConfusionMatrix confusion(std::span<const ConditionLabel> predicted, std::span<const ConditionLabel> truth) {
    if (predicted.size() != truth.size()) throw ContractError("prediction and label sequences differ in length");
    if (truth.empty()) throw ContractError("confusion matrix over no instances");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[index(truth[i])][index(predicted[i])];
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm, View view) {
    MetricsReport rep;
    rep.view = view;
    std::uint64_t correct = 0;
    for (std::size_t t = 0; t < kLabelCount; ++t) {
        if (!in_view(label_at(t), view)) continue;
        for (auto c : cm.counts[t]) rep.instances += c;
        correct += cm.counts[t][t];
    }
    if (rep.instances == 0) throw DomainError("no instances in view " + std::string(name(view)));
    rep.accuracy = ratio(correct, rep.instances);

    for (std::size_t c = 0; c < kLabelCount; ++c) {
        if (!in_view(label_at(c), view)) continue;
        std::uint64_t support = 0;
        for (auto v : cm.counts[c]) support += v;
        if (support == 0) continue;
        const std::uint64_t tp = cm.counts[c][c];
        std::uint64_t predicted = 0;  // column total within the view's rows
        for (std::size_t t = 0; t < kLabelCount; ++t)
            if (in_view(label_at(t), view)) predicted += cm.counts[t][c];
        const double p = ratio(tp, predicted);
        const double r = ratio(tp, support);
        rep.per_class.push_back({label_at(c), support, p, r, harmonic(p, r)});
    }
    for (const auto& m : rep.per_class) {
        rep.macro_precision += m.precision;
        rep.macro_recall += m.recall;
        rep.macro_f1 += m.f1;
    }
    const double n = static_cast<double>(rep.per_class.size());
    rep.macro_precision /= n;
    rep.macro_recall /= n;
    rep.macro_f1 /= n;
    return rep;
}

BinaryMetrics binary_metrics(const ConfusionMatrix& cm) {
    std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t t = 0; t < kLabelCount; ++t)
        for (std::size_t p = 0; p < kLabelCount; ++p) {
            const auto c = cm.counts[t][p];
            const bool mt = is_malicious(label_at(t));
            const bool mp = is_malicious(label_at(p));
            (mt ? (mp ? tp : fn) : (mp ? fp : tn)) += c;
        }
    BinaryMetrics b;
    b.instances = tp + fp + fn + tn;
    if (b.instances == 0) throw DomainError("binary metrics over no instances");
    b.accuracy = ratio(tp + tn, b.instances);
    b.precision = ratio(tp, tp + fp);
    b.recall = ratio(tp, tp + fn);
    b.f1 = harmonic(b.precision, b.recall);
    return b;
}

}  // namespace hg
