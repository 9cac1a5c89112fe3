#include "healthguard/domain.hpp"

#include "healthguard/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace hg {
namespace {

using F = FeatureKind;

constexpr std::array<std::string_view, kDeviceCount> kDeviceNames = {
    "heart_bp_monitor", "insulin_pump",    "pulse_oximeter", "resp_sweat_monitor",
    "alcohol_monitor",  "hemoglobin_meter", "neural_headset", "sleep_motion_watch",
};

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "heart_rate",  "systolic", "diastolic",  "glucose",           "spo2",        "respiration",
    "sweat_rate",  "alcohol",  "hemoglobin", "eeg_dominant_freq", "sleep_state", "motion_level",
};

constexpr std::array<std::string_view, kFeatureCount> kFeatureUnits = {
    "bpm", "mmHg", "mmHg", "mg/dl", "percent", "breaths/min",
    "u/min/cm2", "g/dl", "g/dl", "Hz", "code", "unitless",
};

constexpr std::array<std::string_view, kFeatureCount> kTableCodes = {
    "ECG", "BP", "BP", "GL", "OX", "BR", "SW", "AL", "HG", "NA", "SL", "HM",
};

constexpr std::array<std::string_view, kLabelCount> kLabelNames = {
    "Sleeping",          "Walking",           "Stress",          "Exercise",
    "Drunk",             "HeartAttack",       "Stroke",          "HighBloodPressure",
    "HighCholesterol",   "ExcessiveSweating", "AbnormalOxygen",  "AbnormalBloodSugar",
    "FalseDataInjection", "TamperedDevice",   "DenialOfService",
};

// Features are numbered so that each device owns a contiguous run.
constexpr std::array<F, kFeatureCount> kFeatureOrder = {
    F::HeartRate, F::Systolic,   F::Diastolic, F::Glucose,         F::Spo2,       F::Respiration,
    F::SweatRate, F::Alcohol,    F::Hemoglobin, F::EegDominantFreq, F::SleepState, F::MotionLevel,
};

struct DeviceSpan {
    std::size_t first;
    std::size_t count;
};

constexpr std::array<DeviceSpan, kDeviceCount> kDeviceSpans = {{
    {0, 3},   // HeartBpMonitor: heart_rate, systolic, diastolic
    {3, 1},   // InsulinPump: glucose
    {4, 1},   // PulseOximeter: spo2
    {5, 2},   // RespSweatMonitor: respiration, sweat_rate
    {7, 1},   // AlcoholMonitor
    {8, 1},   // HemoglobinMeter
    {9, 1},   // NeuralHeadset
    {10, 2},  // SleepMotionWatch: sleep_state, motion_level
}};

constexpr std::array<std::uint32_t, kDeviceCount> kPeriods = {10, 60, 10, 15, 60, 300, 10, 30};

const std::array<ValueRange, kFeatureCount> kNominal = {{
    {60.0, 100.0, true, true},   // heart_rate
    {90.0, 120.0, true, true},   // systolic
    {60.0, 80.0, true, true},    // diastolic
    {70.0, 130.0, true, true},   // glucose
    {94.0, 99.0, true, true},    // spo2
    {12.0, 20.0, true, true},    // respiration
    {0.2, 0.5, true, true},      // sweat_rate
    {0.0, 0.08, true, false},    // alcohol: 0.08 is already a violation
    {12.3, 17.5, true, true},    // hemoglobin
    {0.5, 24.0, true, true},     // eeg_dominant_freq, union of delta..beta
    {0.0, 2.0, true, true},      // sleep_state
    {0.0, 0.5, true, true},      // motion_level
}};

const std::array<ValueRange, kFeatureCount> kPhysical = {{
    {20.0, 250.0},
    {50.0, 250.0},
    {30.0, 150.0},
    {20.0, 600.0},
    {50.0, 100.0},
    {4.0, 60.0},
    {0.0, 5.0},
    {0.0, 0.5},
    {3.0, 25.0},
    {0.1, 40.0},
    {0.0, 2.0},
    {0.0, 1.0},
}};

struct TableRow {
    ConditionLabel condition;
    std::string_view marks;  // space separated column codes with a checkmark
};

// Transcribed checkmarks. Activities from the normal-activity table, diseases
// from the disease table. Drunk has a blank NA cell, read as unaffected.
constexpr std::array<TableRow, kBenignCount> kTableRows = {{
    {ConditionLabel::Sleeping, "ECG BP GL BR OX"},
    {ConditionLabel::Walking, "ECG GL BR OX SW HM HG NA"},
    {ConditionLabel::Stress, "ECG BP BR SW NA"},
    {ConditionLabel::Exercise, "ECG BP GL BR OX SW HM NA"},
    {ConditionLabel::Drunk, "BP GL BR AL"},
    {ConditionLabel::HeartAttack, "ECG BR SW NA"},
    {ConditionLabel::Stroke, "ECG BP HM HG NA"},
    {ConditionLabel::HighBloodPressure, "SW BP GL OX SL HG AL NA"},
    {ConditionLabel::HighCholesterol, "SW BP GL OX HG NA"},
    {ConditionLabel::ExcessiveSweating, "ECG SW BP GL OX HG NA HM"},
    {ConditionLabel::AbnormalOxygen, "ECG BP GL BR OX SL NA HM"},
    {ConditionLabel::AbnormalBloodSugar, "ECG SW BP GL OX HG NA"},
}};

struct LowShift {
    ConditionLabel condition;
    FeatureKind feature;
};

// Everything affected shifts high except these decreases.
constexpr std::array<LowShift, 4> kLowShifts = {{
    {ConditionLabel::Exercise, F::Glucose},
    {ConditionLabel::Exercise, F::Spo2},
    {ConditionLabel::Sleeping, F::HeartRate},
    {ConditionLabel::Sleeping, F::Respiration},
}};
// Exercise also lowers hemoglobin, but HG carries no checkmark on the
// Exercise row, so there is nothing to shift.

std::array<EffectEntry, kBenignCount> build_effects() {
    std::array<EffectEntry, kBenignCount> out{};
    for (std::size_t r = 0; r < kBenignCount; ++r) {
        const auto& row = kTableRows[r];
        EffectEntry& e = out[r];
        e.condition = row.condition;
        e.shift.fill(Shift::None);
        std::string_view rest = row.marks;
        while (!rest.empty()) {
            const auto sp = rest.find(' ');
            const std::string_view code = rest.substr(0, sp);
            for (std::size_t f = 0; f < kFeatureCount; ++f)
                if (kTableCodes[f] == code) e.shift[f] = Shift::High;
            rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
        }
        for (const auto& low : kLowShifts)
            if (low.condition == row.condition && e.shift[index(low.feature)] != Shift::None)
                e.shift[index(low.feature)] = Shift::Low;
    }
    return out;
}

const std::array<EffectEntry, kBenignCount>& effects() {
    static const auto table = build_effects();
    return table;
}

template <std::size_t N>
std::optional<std::size_t> find_name(const std::array<std::string_view, N>& names, std::string_view s) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return i;
    return std::nullopt;
}

}  // namespace

std::vector<DeviceKind> DeviceMask::devices() const {
    std::vector<DeviceKind> out;
    for (DeviceKind d : kAllDevices)
        if (contains(d)) out.push_back(d);
    return out;
}

std::string_view name(DeviceKind d) { return kDeviceNames[index(d)]; }
std::string_view name(FeatureKind f) { return kFeatureNames[index(f)]; }
std::string_view name(ConditionLabel c) { return kLabelNames[index(c)]; }
std::string_view table_code(FeatureKind f) { return kTableCodes[index(f)]; }

std::optional<DeviceKind> parse_device(std::string_view s) {
    if (auto i = find_name(kDeviceNames, s)) return device_at(*i);
    return std::nullopt;
}
std::optional<FeatureKind> parse_feature(std::string_view s) {
    if (auto i = find_name(kFeatureNames, s)) return feature_at(*i);
    return std::nullopt;
}
std::optional<ConditionLabel> parse_label(std::string_view s) {
    if (auto i = find_name(kLabelNames, s)) return label_at(*i);
    return std::nullopt;
}

std::span<const FeatureKind> device_features(DeviceKind d) {
    const auto& s = kDeviceSpans[index(d)];
    return std::span<const FeatureKind>(kFeatureOrder).subspan(s.first, s.count);
}

DeviceKind owner(FeatureKind f) {
    for (std::size_t d = 0; d < kDeviceCount; ++d) {
        const auto& s = kDeviceSpans[d];
        if (index(f) >= s.first && index(f) < s.first + s.count) return device_at(d);
    }
    throw DomainError("feature has no owning device");
}

std::uint32_t native_period_seconds(DeviceKind d) { return kPeriods[index(d)]; }

ValueRange nominal_range(FeatureKind f) { return kNominal[index(f)]; }
ValueRange physical_bounds(FeatureKind f) { return kPhysical[index(f)]; }
bool is_categorical(FeatureKind f) { return f == F::SleepState; }

bool in_nominal(FeatureKind f, double value) {
    if (!std::isfinite(value))
        throw DomainError("in_nominal: non-finite value for " + std::string(name(f)));
    return nominal_range(f).contains(value);
}

const EffectEntry& effect(ConditionLabel c) {
    if (!is_benign(c))
        throw DomainError("no effect entry for malicious label " + std::string(name(c)));
    return effects()[index(c)];
}

std::vector<FeatureKind> affected_features(ConditionLabel c) {
    const EffectEntry& e = effect(c);
    std::vector<FeatureKind> out;
    for (std::size_t f = 0; f < kFeatureCount; ++f)
        if (e.shift[f] != Shift::None) out.push_back(feature_at(f));
    return out;
}

void write_effect_fixture(std::ostream& out) {
    out << "condition";
    for (auto n : kFeatureNames) out << ',' << n;
    out << '\n';
    for (const auto& e : effects()) {
        out << name(e.condition);
        for (Shift s : e.shift) out << ',' << (s == Shift::High ? 'H' : s == Shift::Low ? 'L' : '-');
        out << '\n';
    }
}

void write_range_fixture(std::ostream& out) {
    out << "feature,lo,hi,lo_inclusive,hi_inclusive,unit\n";
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const auto& r = kNominal[f];
        out << kFeatureNames[f] << ',' << r.lo << ',' << r.hi << ',' << (r.lo_inclusive ? 1 : 0) << ','
            << (r.hi_inclusive ? 1 : 0) << ',' << kFeatureUnits[f] << '\n';
    }
}

}  // namespace hg
