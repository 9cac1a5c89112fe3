#pragma once

// Shared train/predict interface over the four detectors.

#include "healthguard/knn.hpp"
#include "healthguard/mlp.hpp"
#include "healthguard/pipeline.hpp"
#include "healthguard/standardizer.hpp"
#include "healthguard/tree.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hg {

enum class Algorithm : std::uint8_t { KNN, DT, RF, ANN };

inline constexpr std::array<Algorithm, 4> kAllAlgorithms = {Algorithm::KNN, Algorithm::DT, Algorithm::RF,
                                                            Algorithm::ANN};
inline constexpr std::uint32_t kModelSchemaVersion = 1;

std::string_view name(Algorithm a);
/// Accepts knn, dt, rf, ann (any case).
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct Hyperparams {
    std::uint32_t knn_k = 5;
    std::uint32_t dt_max_depth = 16;
    std::uint32_t dt_min_samples_split = 2;
    std::uint32_t rf_trees = 100;
    std::uint32_t rf_features_per_split = 4;  // floor(sqrt(20))
    std::vector<std::uint32_t> ann_hidden{64};
    double ann_learning_rate = 0.01;
    double ann_momentum = 0.9;
    std::uint32_t ann_epochs = 50;
    std::uint32_t ann_batch = 32;

    /// Throws ConfigError.
    void validate() const;
    /// Applies `key=value` (names as the fields above; ann_hidden is a
    /// comma list). Throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct KnnParams {
    Matrix points;  // standardized training rows
    std::vector<std::uint8_t> labels;
    std::shared_ptr<const KdTree> index;  // rebuilt on load
};

struct TreeParamsPayload {
    DecisionTree tree;
};

struct ForestParams {
    std::vector<DecisionTree> trees;
};

struct MlpParams {
    Mlp net;
};

using ModelParams = std::variant<KnnParams, TreeParamsPayload, ForestParams, MlpParams>;

struct Model {
    Algorithm algorithm = Algorithm::DT;
    Hyperparams hyperparams;
    Standardizer standardizer;
    ModelParams params;
    std::array<ConditionLabel, kLabelCount> label_set{};
    std::uint32_t schema_version = kModelSchemaVersion;
    /// Training diagnostics; not serialized.
    std::optional<TrainTrace> trace;
};

struct Prediction {
    ConditionLabel label;
    ClassScores scores;
};

std::array<ConditionLabel, kLabelCount> canonical_label_set();

/// Throws ConfigError for an empty dataset or invalid hyperparameters.
Model train(Algorithm algorithm, const LabeledDataset& dataset, const Hyperparams& hyperparams, std::uint64_t seed);

/// Builds a random forest on an already standardized design matrix. Trees
/// grow in parallel; tree t uses seed ^ t for its bootstrap and feature draws.
ForestParams grow_forest(const Matrix& x, std::span<const std::uint8_t> labels, const Hyperparams& hp,
                         std::uint64_t seed, bool parallel = true);

/// `x` is a raw 20-wide input (features then flags). Throws ContractError on
/// a dimension mismatch.
Prediction predict(const Model& model, std::span<const double> x);
Prediction predict(const Model& model, const FeatureVector& v);

/// Exhaustive-scan KNN answer for `x`; reference for the k-d tree path.
ConditionLabel knn_brute_force(const Model& model, std::span<const double> x);
ConditionLabel knn_brute_force(const Model& model, const FeatureVector& v);

enum class Execution { Serial, Parallel };

/// Predicts every instance. Output order matches input order for both modes.
std::vector<Prediction> predict_batch(const Model& model, std::span<const LabeledInstance> instances,
                                      Execution exec = Execution::Parallel);

/// Share of instances whose prediction equals the label.
double accuracy_on(const Model& model, std::span<const LabeledInstance> instances);

}  // namespace hg
