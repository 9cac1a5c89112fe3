#pragma once

// Evaluation runners: benign/malicious detection, device-count ablation, and
// simultaneous-attack degradation, plus report rendering.

#include "healthguard/dataset.hpp"
#include "healthguard/metrics.hpp"
#include "healthguard/model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace hg {

struct AlgorithmResult {
    Algorithm algorithm{};
    std::optional<MetricsReport> all;
    std::optional<MetricsReport> benign;
    std::optional<MetricsReport> malicious;
    BinaryMetrics binary;
    double train_seconds = 0.0;
};

struct ExperimentResult {
    std::string experiment;  // detection | ablation | simultaneous
    std::uint64_t seed = 0;
    std::uint32_t device_count = kDeviceCount;
    std::uint32_t attack_kinds = 0;
    DeviceMask device_mask = DeviceMask::all();
    std::vector<AlgorithmResult> algorithms;

    const AlgorithmResult& of(Algorithm a) const;
};

/// Scores one trained model on labeled instances.
AlgorithmResult score(Algorithm algorithm, std::span<const Prediction> predictions,
                      std::span<const LabeledInstance> truth);

/// 70/30 stratified split (by default), trains each algorithm with `seed`,
/// reports All, Benign and Malicious views.
ExperimentResult run_detection_experiment(const LabeledDataset& dataset, std::span<const Algorithm> algorithms,
                                          const Hyperparams& hp, std::uint64_t seed, double train_fraction = 0.7,
                                          SplitMode mode = SplitMode::Stratified);

/// Devices removed first when shrinking the device set: HemoglobinMeter,
/// AlcoholMonitor, NeuralHeadset, PulseOximeter, then RespSweatMonitor,
/// InsulinPump, HeartBpMonitor.
std::vector<DeviceKind> default_removal_order();
/// The first (8 - count) devices of `removal_order` are masked out.
DeviceMask mask_for_count(std::uint32_t count, std::span<const DeviceKind> removal_order);

struct AblationOptions {
    std::vector<std::uint32_t> device_counts{4, 5, 6, 7, 8};
    std::vector<DeviceKind> removal_order = default_removal_order();
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
};

/// One ExperimentResult per (device count, seed): the recipe is regenerated
/// with the reduced mask and recipe seed = cell seed, then run through the
/// detection experiment with the same seed.
std::vector<ExperimentResult> run_device_ablation(const DatasetRecipe& base, std::span<const Algorithm> algorithms,
                                                  const Hyperparams& hp, const AblationOptions& options);

struct SimultaneousOptions {
    std::vector<std::uint32_t> concurrent_kinds{1, 2, 3};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::uint32_t test_streams = 30;
    bool include_control = true;  // 0-attack streams
};

/// Attack windows of `kinds` distinct attack kinds forming one overlapping
/// episode starting at `onset`: each window starts inside the previous one
/// and ends after it, so every kind owns at least one minute under
/// earliest-onset labeling.
std::vector<AttackEvent> concurrent_episode(std::span<const ConditionLabel> kinds, std::uint32_t onset,
                                            DeviceMask devices, std::uint32_t duration_min,
                                            std::uint32_t duration_max, Rng& rng);
/// Minutes an episode of `kinds` attacks can span at most.
std::uint32_t episode_span(std::uint32_t kinds, std::uint32_t duration_max);

/// Test streams where `kinds` distinct attack kinds overlap. Episode onsets
/// follow the recipe's Poisson onset process; every stream has at least one.
std::vector<TelemetryStream> simultaneous_test_streams(const DatasetRecipe& base, std::uint32_t kinds,
                                                       std::uint32_t streams, std::uint64_t seed);

/// Models are trained once per seed on the recipe's dataset (single-threat
/// windows), then scored on fresh concurrent-attack streams per kind count.
std::vector<ExperimentResult> run_simultaneous_attacks(const DatasetRecipe& base, std::span<const Algorithm> algorithms,
                                                       const Hyperparams& hp, const SimultaneousOptions& options);

/// Mean and standard error over seeds.
struct Summary {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};
Summary summarize(std::span<const double> values);

/// Cell key: (experiment, device_count, attack_kinds, algorithm, view).
using CellKey = std::tuple<std::string, std::uint32_t, std::uint32_t, Algorithm, std::string>;
struct CellSummary {
    Summary accuracy, precision, recall, f1;
};
/// Aggregates over seeds, sorted by cell key. View "Binary" holds the
/// benign/malicious projection.
std::map<CellKey, CellSummary> aggregate(std::span<const ExperimentResult> results);

/// Writes the fixed-width text tables to `text_path` and per-seed plus mean
/// rows to `csv_path`. Byte-identical for identical results. Throws IoError.
void render_report(std::span<const ExperimentResult> results, const std::string& text_path,
                   const std::string& csv_path);
std::string render_text(std::span<const ExperimentResult> results);
std::string render_csv(std::span<const ExperimentResult> results);

}  // namespace hg
