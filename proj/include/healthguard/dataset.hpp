#pragma once

// Whole-dataset recipe: many scripted scenarios, each generated, attacked,
// resampled and merged, then concatenated in scenario order.

#include "healthguard/pipeline.hpp"
#include "healthguard/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hg {

struct DatasetRecipe {
    std::uint32_t instances = 20000;
    std::uint32_t scenario_minutes = 200;
    std::uint32_t segment_minutes = 20;
    /// Explicit script. When set, exactly one scenario is generated from it and
    /// `instances`, `scenario_minutes`, `segment_minutes` are ignored.
    std::vector<Segment> segments;
    std::uint64_t seed = 0;
    DeviceMask devices = DeviceMask::all();
    double noise_scale = 0.05;

    /// Target share of attack minutes; used to derive the onset rate when
    /// `rate_per_hour` is unset.
    double malicious_fraction = 0.15;
    std::optional<double> rate_per_hour;
    std::uint32_t duration_min = 5;
    std::uint32_t duration_max = 30;
    std::vector<ConditionLabel> threats{kAttackLabels.begin(), kAttackLabels.end()};
    /// Explicit attack windows (script mode only). Replaces Poisson sampling.
    std::vector<AttackEvent> events;

    double attack_rate() const;
    /// Scenario configs in generation order.
    std::vector<ScenarioConfig> scenarios() const;
    AttackConfig attack_config(std::size_t scenario_index) const;
    /// Throws ConfigError.
    void validate() const;
};

/// Generates every scenario (in parallel, deterministic for any thread count)
/// and returns the concatenated labeled minutes. Minutes are numbered
/// globally across scenarios.
LabeledDataset build_dataset(const DatasetRecipe& recipe);

/// Same as build_dataset but also returns the attack windows per scenario.
struct BuiltDataset {
    LabeledDataset dataset;
    std::vector<std::vector<AttackEvent>> events;  // per scenario
    std::vector<std::uint32_t> scenario_offsets;   // first global minute of each scenario
};
BuiltDataset build_dataset_with_events(const DatasetRecipe& recipe);

/// Key/value config parser. Lines are `key = value`; `#` starts a comment.
/// Throws ConfigError carrying the offending line number.
DatasetRecipe parse_recipe(std::istream& in);
/// Throws ConfigError when the file is missing or malformed.
DatasetRecipe load_recipe(const std::string& path);

/// Comma-separated dataset file: header, then minute, 12 features, 8
/// availability flags, label. Values printed with 6 decimals.
void write_dataset(std::ostream& out, const LabeledDataset& dataset);
void save_dataset(const std::string& path, const LabeledDataset& dataset);
/// Throws FormatError with the 1-based line number of the first bad line.
LabeledDataset read_dataset(std::istream& in);
LabeledDataset load_dataset(const std::string& path);
std::string dataset_header();

}  // namespace hg
