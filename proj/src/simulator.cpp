#include "healthguard/simulator.hpp"

#include "healthguard/errors.hpp"
#include "healthguard/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hg {
namespace {

constexpr double kTruncateSigmas = 3.0;
constexpr std::uint64_t kForgeSalt = 0xF0F0'5EED'0000'0001ull;

double round_code(double v, const ValueRange& bounds) {
    return std::clamp(std::round(v), bounds.lo, bounds.hi);
}

double finish_value(FeatureKind f, double v) {
    const ValueRange bounds = physical_bounds(f);
    v = std::clamp(v, bounds.lo, bounds.hi);
    return is_categorical(f) ? round_code(v, bounds) : v;
}

std::size_t feature_slot(DeviceKind d, FeatureKind f) {
    const auto feats = device_features(d);
    for (std::size_t i = 0; i < feats.size(); ++i)
        if (feats[i] == f) return i;
    throw DomainError(std::string(name(f)) + " is not reported by " + std::string(name(d)));
}

// Forged readings replay one healthy-looking level per window: uniform over
// the nominal range, with reading-to-reading jitter. Categorical features keep
// their healthy code.
constexpr double kForgeJitter = 0.05;

double forge_level(FeatureKind f, Rng& rng) {
    const ValueRange r = nominal_range(f);
    if (is_categorical(f)) return r.midpoint();
    std::uniform_real_distribution<double> u(r.lo, r.hi);
    return u(rng);
}

double forge_value(FeatureKind f, double level, Rng& rng) {
    if (is_categorical(f)) return finish_value(f, level);
    const double sigma = kForgeJitter * nominal_range(f).width();
    std::normal_distribution<double> jitter(0.0, sigma);
    double dv;
    do dv = jitter(rng);
    while (std::abs(dv) > kTruncateSigmas * sigma);
    return finish_value(f, level + dv);
}

void relabel(std::vector<ConditionLabel>& truth, const std::vector<AttackEvent>& events) {
    // events are sorted by onset; the first window to claim a minute keeps it
    std::vector<bool> claimed(truth.size(), false);
    for (const auto& e : events) {
        for (std::uint32_t m = e.onset_minute; m < e.end_minute() && m < truth.size(); ++m) {
            if (claimed[m]) continue;
            truth[m] = e.kind;
            claimed[m] = true;
        }
    }
}

}  // namespace

double Reading::value(FeatureKind f) const { return values[feature_slot(device, f)]; }

std::uint32_t ScenarioConfig::total_minutes() const {
    std::uint32_t total = 0;
    for (const auto& s : segments) total += s.minutes;
    return total;
}

void ScenarioConfig::validate() const {
    if (enabled_devices.empty()) throw ConfigError("scenario has no enabled devices");
    if (segments.empty()) throw ConfigError("scenario has no segments");
    for (const auto& s : segments) {
        if (!is_benign(s.condition))
            throw ConfigError("segment condition " + std::string(name(s.condition)) + " is not benign");
        if (s.minutes == 0) throw ConfigError("segment duration must be positive");
    }
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
        throw ConfigError("noise_scale must be a finite nonnegative number");
}

void AttackConfig::validate(std::uint32_t total_minutes) const {
    if (!(rate_per_hour >= 0.0) || !std::isfinite(rate_per_hour))
        throw ConfigError("rate_per_hour must be a finite nonnegative number");
    if (enabled_threats.empty()) throw ConfigError("no threats enabled");
    for (auto t : enabled_threats)
        if (!is_malicious(t)) throw ConfigError(std::string(name(t)) + " is not an attack label");
    if (duration_min < 1 || duration_min > duration_max)
        throw ConfigError("attack duration range must satisfy 1 <= min <= max");
    if (duration_max > total_minutes)
        throw ConfigError("attack duration_max exceeds scenario length");
}

double sample_feature(FeatureKind f, ConditionLabel c, double noise_scale, std::mt19937_64& rng) {
    const ValueRange r = nominal_range(f);
    const double width = r.width();
    double center = r.midpoint();
    switch (effect(c).shift[index(f)]) {
        case Shift::High: center = r.hi + kShiftFraction * width; break;
        case Shift::Low: center = r.lo - kShiftFraction * width; break;
        case Shift::None: break;
    }
    const double sigma = noise_scale * width;
    double v = center;
    if (sigma > 0.0) {
        std::normal_distribution<double> g(0.0, 1.0);
        double z;
        do {
            z = g(rng);
        } while (std::abs(z) > kTruncateSigmas);
        v = center + sigma * z;
    }
    return finish_value(f, v);
}

TelemetryStream generate_benign(const ScenarioConfig& config) {
    config.validate();
    TelemetryStream out;
    out.enabled_devices = config.enabled_devices;
    out.ground_truth.reserve(config.total_minutes());
    for (const auto& s : config.segments) out.ground_truth.insert(out.ground_truth.end(), s.minutes, s.condition);

    const std::uint32_t horizon_s = config.total_minutes() * 60u;
    Rng rng(config.seed);
    for (DeviceKind d : kAllDevices) {
        if (!config.enabled_devices.contains(d)) continue;
        const auto feats = device_features(d);
        const std::uint32_t period = native_period_seconds(d);
        auto& list = out.readings[index(d)];
        list.reserve(horizon_s / period + 1);
        for (std::uint32_t t = 0; t < horizon_s; t += period) {
            const ConditionLabel c = out.ground_truth[t / 60];
            Reading r{d, t, {}};
            for (std::size_t i = 0; i < feats.size(); ++i)
                r.values[i] = sample_feature(feats[i], c, config.noise_scale, rng);
            list.push_back(r);
        }
    }
    return out;
}

std::vector<std::uint32_t> sample_attack_onsets(double rate_per_hour, std::uint32_t horizon_minutes,
                                                std::uint64_t seed) {
    if (!(rate_per_hour >= 0.0) || !std::isfinite(rate_per_hour))
        throw DomainError("attack rate must be a finite nonnegative number");
    if (horizon_minutes < 1) throw DomainError("attack horizon must be at least one minute");
    std::vector<std::uint32_t> onsets;
    if (rate_per_hour == 0.0) return onsets;
    Rng rng(seed);
    std::exponential_distribution<double> gap(rate_per_hour / 60.0);
    for (double t = gap(rng); t < horizon_minutes; t += gap(rng))
        onsets.push_back(static_cast<std::uint32_t>(t));
    return onsets;
}

std::vector<AttackEvent> plan_attacks(const TelemetryStream& stream, const AttackConfig& config) {
    const std::uint32_t horizon = stream.minutes();
    config.validate(horizon);
    const auto enabled = stream.enabled_devices.devices();
    if (enabled.empty()) throw ConfigError("stream has no enabled devices");

    const auto onsets = sample_attack_onsets(config.rate_per_hour, horizon, config.seed);
    Rng rng(derive_seed(config.seed, 1));
    std::uniform_int_distribution<std::size_t> pick_threat(0, config.enabled_threats.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_device(0, enabled.size() - 1);
    std::uniform_int_distribution<std::uint32_t> pick_duration(config.duration_min, config.duration_max);

    std::vector<AttackEvent> events;
    for (std::uint32_t onset : onsets) {
        const ConditionLabel kind = config.enabled_threats[pick_threat(rng)];
        DeviceKind target = enabled[pick_device(rng)];
        if (kind == ConditionLabel::TamperedDevice && config.tamper_target &&
            stream.enabled_devices.contains(*config.tamper_target))
            target = *config.tamper_target;
        const std::uint32_t duration = std::min(pick_duration(rng), horizon - onset);
        events.push_back({kind, target, onset, duration});
    }

    // merge overlapping windows of the same kind on the same device
    std::vector<AttackEvent> merged;
    for (const auto& e : events) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const AttackEvent& m) {
            return m.kind == e.kind && m.target == e.target && e.onset_minute < m.end_minute();
        });
        if (it == merged.end()) {
            merged.push_back(e);
        } else {
            const std::uint32_t end = std::max(it->end_minute(), e.end_minute());
            it->duration_minutes = end - it->onset_minute;
        }
    }
    return merged;
}

TelemetryStream apply_attacks(TelemetryStream stream, std::vector<AttackEvent> events, std::uint64_t forge_seed) {
    if (!stream.events.empty()) throw ContractError("apply_attacks expects a benign stream");
    const std::uint32_t horizon = stream.minutes();
    for (const auto& e : events) {
        if (!is_malicious(e.kind)) throw ContractError("attack event kind must be malicious");
        if (e.duration_minutes == 0 || e.end_minute() > horizon)
            throw ContractError("attack window outside scenario bounds");
        if (!stream.enabled_devices.contains(e.target)) throw ContractError("attack target is not enabled");
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const AttackEvent& a, const AttackEvent& b) { return a.onset_minute < b.onset_minute; });

    for (std::size_t i = 0; i < events.size(); ++i) {
        const AttackEvent& e = events[i];
        auto& list = stream.readings[index(e.target)];
        const std::uint32_t lo = e.onset_minute * 60u;
        const std::uint32_t hi = e.end_minute() * 60u;
        auto first = std::lower_bound(list.begin(), list.end(), lo,
                                      [](const Reading& r, std::uint32_t t) { return r.t_seconds < t; });
        auto last = std::lower_bound(first, list.end(), hi,
                                     [](const Reading& r, std::uint32_t t) { return r.t_seconds < t; });
        const auto feats = device_features(e.target);
        switch (e.kind) {
            case ConditionLabel::DenialOfService:
                list.erase(first, last);
                break;
            case ConditionLabel::FalseDataInjection: {
                Rng rng(derive_seed(forge_seed, i, kForgeSalt));
                std::array<double, kMaxDeviceFeatures> level{};
                for (std::size_t k = 0; k < feats.size(); ++k) level[k] = forge_level(feats[k], rng);
                for (auto it = first; it != last; ++it)
                    for (std::size_t k = 0; k < feats.size(); ++k) it->values[k] = forge_value(feats[k], level[k], rng);
                break;
            }
            case ConditionLabel::TamperedDevice: {
                if (first == last) break;
                // the device stops changing state and never reports sleep
                const auto frozen = (first == list.begin() ? first : std::prev(first))->values;
                for (auto it = first; it != last; ++it) {
                    it->values = frozen;
                    for (std::size_t k = 0; k < feats.size(); ++k)
                        if (feats[k] == FeatureKind::SleepState) it->values[k] = 0.0;
                }
                break;
            }
            default:
                break;
        }
    }
    relabel(stream.ground_truth, events);
    stream.events = std::move(events);
    return stream;
}

TelemetryStream inject_attacks(const TelemetryStream& stream, const AttackConfig& config) {
    if (!stream.events.empty()) throw ContractError("inject_attacks expects a benign stream");
    auto events = plan_attacks(stream, config);
    return apply_attacks(stream, std::move(events), config.seed);
}

double expected_attack_coverage(double rate_per_hour, std::uint32_t horizon, std::uint32_t duration_min,
                                std::uint32_t duration_max) {
    const double per_minute = rate_per_hour / 60.0;
    const double n_durations = duration_max - duration_min + 1.0;
    // survival of the duration: P(D > j)
    auto survival = [&](std::uint32_t j) {
        if (j < duration_min) return 1.0;
        if (j >= duration_max) return 0.0;
        return (duration_max - j) / n_durations;
    };
    double covered = 0.0;
    double reach = 0.0;  // sum_{j<=m} P(D > j)
    for (std::uint32_t m = 0; m < horizon; ++m) {
        reach += survival(m);
        covered += 1.0 - std::exp(-per_minute * reach);
    }
    return covered / horizon;
}

double rate_for_attack_fraction(double fraction, std::uint32_t horizon, std::uint32_t duration_min,
                                std::uint32_t duration_max) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("attack fraction must be in (0, 1)");
    double lo = 0.0;
    double hi = 1.0;
    while (expected_attack_coverage(hi, horizon, duration_min, duration_max) < fraction) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (expected_attack_coverage(mid, horizon, duration_min, duration_max) < fraction ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hg
