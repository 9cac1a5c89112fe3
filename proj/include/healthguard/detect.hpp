#pragma once

// Alerting: turns malicious predictions into log records.

#include "healthguard/model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace hg {

struct Alert {
    std::uint32_t minute = 0;
    ConditionLabel kind{};
    double confidence = 0.0;  // in (0, 1]
    DeviceKind device{};
    std::string message;
};

/// First device with availability 0; otherwise the device owning the feature
/// farthest from its nominal midpoint, in units of the training stddev.
DeviceKind implicated_device(const FeatureVector& v, const Standardizer& standardizer);

/// Empty for a benign prediction.
std::optional<Alert> make_alert(const FeatureVector& v, const Prediction& p, const Standardizer& standardizer);

struct DetectionSummary {
    std::size_t instances = 0;
    std::size_t alerts = 0;
    std::array<std::size_t, kLabelCount> by_kind{};
};

/// Predicts every vector and keeps one alert per malicious prediction.
std::vector<Alert> detect(const Model& model, std::span<const FeatureVector> vectors);
DetectionSummary summarize_alerts(std::size_t instances, std::span<const Alert> alerts);

/// `minute,<kind>,<confidence>,<device>,<message>`
std::string format_alert(const Alert& a);
std::string format_summary(const DetectionSummary& s);

}  // namespace hg
