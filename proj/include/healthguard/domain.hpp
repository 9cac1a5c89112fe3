#pragma once

// Device catalog, nominal vital-sign ranges, and the effect tables that say
// which features each benign condition shifts. Everything here is constant.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hg {

enum class DeviceKind : std::uint8_t {
    HeartBpMonitor,
    InsulinPump,
    PulseOximeter,
    RespSweatMonitor,
    AlcoholMonitor,
    HemoglobinMeter,
    NeuralHeadset,
    SleepMotionWatch,
};

enum class FeatureKind : std::uint8_t {
    HeartRate,
    Systolic,
    Diastolic,
    Glucose,
    Spo2,
    Respiration,
    SweatRate,
    Alcohol,
    Hemoglobin,
    EegDominantFreq,
    SleepState,
    MotionLevel,
};

enum class ConditionLabel : std::uint8_t {
    Sleeping,
    Walking,
    Stress,
    Exercise,
    Drunk,
    HeartAttack,
    Stroke,
    HighBloodPressure,
    HighCholesterol,
    ExcessiveSweating,
    AbnormalOxygen,
    AbnormalBloodSugar,
    FalseDataInjection,
    TamperedDevice,
    DenialOfService,
};

inline constexpr std::size_t kDeviceCount = 8;
inline constexpr std::size_t kFeatureCount = 12;
inline constexpr std::size_t kLabelCount = 15;
inline constexpr std::size_t kBenignCount = 12;
/// Width of a merged per-minute input: 12 feature values then 8 availability flags.
inline constexpr std::size_t kInputDim = kFeatureCount + kDeviceCount;
inline constexpr std::size_t kMaxDeviceFeatures = 3;

inline constexpr std::array<DeviceKind, kDeviceCount> kAllDevices = {
    DeviceKind::HeartBpMonitor, DeviceKind::InsulinPump,     DeviceKind::PulseOximeter,
    DeviceKind::RespSweatMonitor, DeviceKind::AlcoholMonitor, DeviceKind::HemoglobinMeter,
    DeviceKind::NeuralHeadset,  DeviceKind::SleepMotionWatch,
};

inline constexpr std::array<ConditionLabel, 3> kAttackLabels = {
    ConditionLabel::FalseDataInjection, ConditionLabel::TamperedDevice,
    ConditionLabel::DenialOfService};

constexpr std::size_t index(DeviceKind d) { return static_cast<std::size_t>(d); }
constexpr std::size_t index(FeatureKind f) { return static_cast<std::size_t>(f); }
constexpr std::size_t index(ConditionLabel c) { return static_cast<std::size_t>(c); }

constexpr DeviceKind device_at(std::size_t i) { return static_cast<DeviceKind>(i); }
constexpr FeatureKind feature_at(std::size_t i) { return static_cast<FeatureKind>(i); }
constexpr ConditionLabel label_at(std::size_t i) { return static_cast<ConditionLabel>(i); }

constexpr bool is_benign(ConditionLabel c) { return index(c) < kBenignCount; }
constexpr bool is_malicious(ConditionLabel c) { return !is_benign(c); }

/// Bit set over the 8 devices.
class DeviceMask {
public:
    constexpr DeviceMask() = default;
    static constexpr DeviceMask all() { return DeviceMask(0xFFu); }
    static constexpr DeviceMask none() { return DeviceMask(0u); }
    static constexpr DeviceMask from_bits(std::uint8_t bits) { return DeviceMask(bits); }

    constexpr bool contains(DeviceKind d) const { return (bits_ >> index(d)) & 1u; }
    constexpr DeviceMask with(DeviceKind d) const {
        return DeviceMask(static_cast<std::uint8_t>(bits_ | (1u << index(d))));
    }
    constexpr DeviceMask without(DeviceKind d) const {
        return DeviceMask(static_cast<std::uint8_t>(bits_ & ~(1u << index(d))));
    }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t count() const {
        std::size_t n = 0;
        for (std::uint8_t b = bits_; b; b &= static_cast<std::uint8_t>(b - 1)) ++n;
        return n;
    }
    constexpr std::uint8_t bits() const { return bits_; }
    std::vector<DeviceKind> devices() const;

    friend constexpr bool operator==(DeviceMask, DeviceMask) = default;

private:
    constexpr explicit DeviceMask(std::uint8_t bits) : bits_(bits) {}
    std::uint8_t bits_ = 0;
};

struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_inclusive = true;
    bool hi_inclusive = true;

    double width() const { return hi - lo; }
    double midpoint() const { return lo + 0.5 * (hi - lo); }
    bool contains(double v) const {
        const bool above = lo_inclusive ? v >= lo : v > lo;
        const bool below = hi_inclusive ? v <= hi : v < hi;
        return above && below;
    }
};

enum class Shift : std::uint8_t { None, High, Low };

/// Row of the effect tables: per-feature shift for one benign condition.
struct EffectEntry {
    ConditionLabel condition;
    std::array<Shift, kFeatureCount> shift{};

    bool affects(FeatureKind f) const { return shift[index(f)] != Shift::None; }
};

std::string_view name(DeviceKind d);
std::string_view name(FeatureKind f);
std::string_view name(ConditionLabel c);
/// Short column code used by the effect tables (ECG, BP, GL, ...).
std::string_view table_code(FeatureKind f);

std::optional<DeviceKind> parse_device(std::string_view s);
std::optional<FeatureKind> parse_feature(std::string_view s);
std::optional<ConditionLabel> parse_label(std::string_view s);

std::span<const FeatureKind> device_features(DeviceKind d);
DeviceKind owner(FeatureKind f);

/// Seconds between consecutive readings of a device.
std::uint32_t native_period_seconds(DeviceKind d);

ValueRange nominal_range(FeatureKind f);
/// Hard physical clamp applied to every generated value.
ValueRange physical_bounds(FeatureKind f);
/// Categorical features carry integer codes and aggregate by mode.
bool is_categorical(FeatureKind f);

/// Throws DomainError for non-finite values.
bool in_nominal(FeatureKind f, double value);

/// Throws DomainError for malicious labels.
const EffectEntry& effect(ConditionLabel c);
/// Features shifted by a benign condition. Throws DomainError for malicious labels.
std::vector<FeatureKind> affected_features(ConditionLabel c);

/// CSV rendering of the effect table: header then one row per benign
/// condition with H/L/- per feature.
void write_effect_fixture(std::ostream& out);
/// CSV rendering of nominal ranges: feature,lo,hi,lo_inclusive,hi_inclusive,unit.
void write_range_fixture(std::ostream& out);

}  // namespace hg
