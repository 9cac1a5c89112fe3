#pragma once

// Benign telemetry synthesis and attack injection.

#include "healthguard/domain.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace hg {

struct Segment {
    ConditionLabel condition;
    std::uint32_t minutes;
};

struct ScenarioConfig {
    std::vector<Segment> segments;
    std::uint64_t seed = 0;
    DeviceMask enabled_devices = DeviceMask::all();
    double noise_scale = 0.05;

    std::uint32_t total_minutes() const;
    /// Throws ConfigError.
    void validate() const;
};

struct AttackConfig {
    double rate_per_hour = 0.0;
    std::uint32_t duration_min = 5;
    std::uint32_t duration_max = 30;
    std::vector<ConditionLabel> enabled_threats{kAttackLabels.begin(), kAttackLabels.end()};
    std::uint64_t seed = 0;
    /// Device hit by TamperedDevice; falls back to a uniform pick when unset
    /// or not enabled in the stream.
    std::optional<DeviceKind> tamper_target = DeviceKind::SleepMotionWatch;

    /// Throws ConfigError.
    void validate(std::uint32_t total_minutes) const;
};

/// One reading of one device; `values` follows device_features(device) order.
struct Reading {
    DeviceKind device;
    std::uint32_t t_seconds;
    std::array<double, kMaxDeviceFeatures> values{};

    double value(FeatureKind f) const;
    friend bool operator==(const Reading&, const Reading&) = default;
};

struct AttackEvent {
    ConditionLabel kind;
    DeviceKind target;
    std::uint32_t onset_minute;
    std::uint32_t duration_minutes;

    std::uint32_t end_minute() const { return onset_minute + duration_minutes; }
    friend bool operator==(const AttackEvent&, const AttackEvent&) = default;
};

struct TelemetryStream {
    std::array<std::vector<Reading>, kDeviceCount> readings;
    std::vector<ConditionLabel> ground_truth;  // one per minute
    std::vector<AttackEvent> events;
    DeviceMask enabled_devices = DeviceMask::all();

    std::uint32_t minutes() const { return static_cast<std::uint32_t>(ground_truth.size()); }
    const std::vector<Reading>& of(DeviceKind d) const { return readings[index(d)]; }
    friend bool operator==(const TelemetryStream&, const TelemetryStream&) = default;
};

/// Shift applied to affected features: the center sits this fraction of the
/// nominal width beyond the violated bound.
inline constexpr double kShiftFraction = 0.20;

/// Draws one value of `f` under condition `c` (benign). Affected features are
/// centered outside the nominal range; others at the nominal midpoint. The
/// Gaussian has sigma = noise_scale * width, truncated at 3 sigma, then
/// clamped to physical bounds. Categorical features are rounded to a code.
double sample_feature(FeatureKind f, ConditionLabel c, double noise_scale, std::mt19937_64& rng);

TelemetryStream generate_benign(const ScenarioConfig& config);

/// Minutes of a homogeneous Poisson process with intensity rate/60 per
/// minute on [0, horizon). Sorted; repeated minutes are possible.
std::vector<std::uint32_t> sample_attack_onsets(double rate_per_hour, std::uint32_t horizon_minutes,
                                                std::uint64_t seed);

/// Attack windows for a stream: Poisson onsets, uniform kind and target,
/// uniform duration clipped to the horizon, same-kind same-device overlaps
/// merged. Sorted by onset.
std::vector<AttackEvent> plan_attacks(const TelemetryStream& stream, const AttackConfig& config);

/// Applies explicit events to a benign stream and relabels ground truth
/// (earliest onset wins on overlap). `forge_seed` drives forged values.
TelemetryStream apply_attacks(TelemetryStream stream, std::vector<AttackEvent> events,
                              std::uint64_t forge_seed);

TelemetryStream inject_attacks(const TelemetryStream& stream, const AttackConfig& config);

/// Expected fraction of minutes inside an attack window for a horizon of
/// `horizon` minutes, given an onset rate and uniform integer durations.
double expected_attack_coverage(double rate_per_hour, std::uint32_t horizon, std::uint32_t duration_min,
                                std::uint32_t duration_max);

/// Onset rate whose expected coverage equals `fraction` (bisection).
double rate_for_attack_fraction(double fraction, std::uint32_t horizon, std::uint32_t duration_min,
                                std::uint32_t duration_max);

}  // namespace hg
