#include "healthguard/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hg {

DeviceKind implicated_device(const FeatureVector& v, const Standardizer& standardizer) {
    for (DeviceKind d : kAllDevices)
        if (!v.available(d)) return d;
    double worst = -1.0;
    DeviceKind device = kAllDevices.front();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const FeatureKind f = feature_at(i);
        const double sd = standardizer.stddev[i] > 0.0 ? standardizer.stddev[i] : 1.0;
        const double z = std::abs(v.values[i] - nominal_range(f).midpoint()) / sd;
        if (z > worst) {
            worst = z;
            device = owner(f);
        }
    }
    return device;
}

std::optional<Alert> make_alert(const FeatureVector& v, const Prediction& p, const Standardizer& standardizer) {
    if (!is_malicious(p.label)) return std::nullopt;
    Alert a;
    a.minute = v.minute;
    a.kind = p.label;
    a.confidence = std::clamp(p.scores[index(p.label)], 1e-9, 1.0);
    a.device = implicated_device(v, standardizer);
    switch (p.label) {
        case ConditionLabel::DenialOfService:
            a.message = "device unreachable";
            break;
        case ConditionLabel::FalseDataInjection:
            a.message = "readings inconsistent with patient state";
            break;
        default:
            a.message = "device behaviour altered";
            break;
    }
    return a;
}

std::vector<Alert> detect(const Model& model, std::span<const FeatureVector> vectors) {
    std::vector<LabeledInstance> rows(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) rows[i].vector = vectors[i];
    const auto predictions = predict_batch(model, rows);
    std::vector<Alert> alerts;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        if (auto a = make_alert(vectors[i], predictions[i], model.standardizer)) alerts.push_back(std::move(*a));
    return alerts;
}

DetectionSummary summarize_alerts(std::size_t instances, std::span<const Alert> alerts) {
    DetectionSummary s;
    s.instances = instances;
    s.alerts = alerts.size();
    for (const auto& a : alerts) ++s.by_kind[index(a.kind)];
    return s;
}

std::string format_alert(const Alert& a) {
    char conf[32];
    std::snprintf(conf, sizeof conf, "%.4f", a.confidence);
    return std::to_string(a.minute) + ',' + std::string(name(a.kind)) + ',' + conf + ',' + std::string(name(a.device)) +
           ',' + a.message;
}

std::string format_summary(const DetectionSummary& s) {
    std::string out = "instances=" + std::to_string(s.instances) + " alerts=" + std::to_string(s.alerts);
    for (ConditionLabel k : kAttackLabels) out += ' ' + std::string(name(k)) + '=' + std::to_string(s.by_kind[index(k)]);
    return out;
}

}  // namespace hg
