#pragma once

#include "healthguard/domain.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hg {

enum class View : std::uint8_t { All, BenignOnly, MaliciousOnly };
std::string_view name(View v);

/// Rows are true labels, columns predictions.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kLabelCount>, kLabelCount> counts{};

    std::uint64_t total() const;
    std::uint64_t operator()(ConditionLabel truth, ConditionLabel predicted) const {
        return counts[index(truth)][index(predicted)];
    }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws ContractError on a length mismatch or empty input.
ConfusionMatrix confusion(std::span<const ConditionLabel> predicted, std::span<const ConditionLabel> truth);

struct ClassMetrics {
    ConditionLabel label;
    std::uint64_t support;  // true instances of this class
    double precision;
    double recall;
    double f1;
};

struct MetricsReport {
    View view = View::All;
    std::uint64_t instances = 0;
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<ClassMetrics> per_class;  // classes present in the view's truth
};

/// Restricts to rows whose true label falls in `view`, then computes
/// accuracy and macro-averaged precision/recall/F1 over the classes present
/// in those rows. Predictions outside the view still count as errors.
/// Throws DomainError when the view holds no instances.
MetricsReport metrics(const ConfusionMatrix& cm, View view);

/// Benign/malicious projection: malicious is the positive class.
struct BinaryMetrics {
    std::uint64_t instances = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};
BinaryMetrics binary_metrics(const ConfusionMatrix& cm);

}  // namespace hg
