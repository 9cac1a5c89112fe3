#pragma once

// Data collector and preprocessing: per-device reading sequences are
// resampled to one value per minute and merged into fixed-width vectors.

#include "healthguard/domain.hpp"
#include "healthguard/simulator.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hg {

inline constexpr std::uint32_t kDatasetSchemaVersion = 1;

using DeviceReadings = std::array<std::vector<Reading>, kDeviceCount>;

/// Per-minute series of one device; `values[m]` follows device_features order.
struct DeviceMinutes {
    DeviceKind device{};
    std::vector<std::array<double, kMaxDeviceFeatures>> values;
    std::vector<std::uint8_t> available;

    std::size_t minutes() const { return values.size(); }
};

struct FeatureVector {
    std::uint32_t minute = 0;
    std::array<double, kFeatureCount> values{};
    std::array<std::uint8_t, kDeviceCount> availability{};

    double value(FeatureKind f) const { return values[index(f)]; }
    bool available(DeviceKind d) const { return availability[index(d)] != 0; }
    /// 12 feature values followed by the 8 flags as 0.0/1.0.
    std::array<double, kInputDim> input() const;
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LabeledInstance {
    FeatureVector vector;
    ConditionLabel label{};
    friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

struct LabeledDataset {
    std::vector<LabeledInstance> instances;
    DeviceMask device_mask = DeviceMask::all();
    std::uint32_t schema_version = kDatasetSchemaVersion;

    std::size_t size() const { return instances.size(); }
    std::array<std::size_t, kLabelCount> label_counts() const;
};

/// Validates per-device time order. Throws IntegrityError on a timestamp that
/// does not strictly increase.
DeviceReadings collect(const TelemetryStream& stream);
/// Groups an interleaved reading log by device, preserving order.
DeviceReadings collect(std::span<const Reading> log);

/// Mean of each feature over [60m, 60(m+1)) (mode for sleep_state, ties to the
/// lower code). Minutes without readings are flagged unavailable and carry the
/// previous value forward; leading gaps use the nominal midpoint.
DeviceMinutes resample_per_minute(std::span<const Reading> readings, DeviceKind device, std::uint32_t minutes);

/// One vector per minute. Devices outside `mask` read as nominal midpoint with
/// availability 1. Every device inside `mask` must have a series covering the
/// same number of minutes, else IntegrityError.
std::vector<FeatureVector> merge(std::span<const DeviceMinutes> series, DeviceMask mask,
                                 std::uint32_t first_minute = 0);

/// collect + resample + merge + ground truth labels.
std::vector<LabeledInstance> stream_to_instances(const TelemetryStream& stream, DeviceMask mask,
                                                 std::uint32_t first_minute = 0);

enum class SplitMode {
    Stratified,  ///< per-label random split across all 15 classes
    Literal,     ///< train on benign only; test = held-out benign + every attack minute
};

/// Returns (train, test), each keeping the original instance order.
/// Stratified mode throws IntegrityError for a present label with < 2 instances.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset, double train_fraction,
                                                std::uint64_t seed, SplitMode mode = SplitMode::Stratified);

}  // namespace hg
