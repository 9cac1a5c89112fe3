#include "healthguard/model.hpp"

#include "healthguard/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <string>

namespace hg {
namespace {

template <typename T>
T parse_value(std::string_view key, std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("invalid value '" + std::string(s) + "' for " + std::string(key));
    return v;
}

std::array<double, kInputDim> to_input(std::span<const double> x) {
    if (x.size() != kInputDim)
        throw ContractError("expected a " + std::to_string(kInputDim) + "-wide input, got " + std::to_string(x.size()));
    std::array<double, kInputDim> a{};
    std::copy(x.begin(), x.end(), a.begin());
    return a;
}

const KnnParams& knn_params(const Model& model) {
    const auto* p = std::get_if<KnnParams>(&model.params);
    if (!p || model.algorithm != Algorithm::KNN) throw ContractError("model is not a KNN model");
    return *p;
}

}  // namespace

std::string_view name(Algorithm a) {
    switch (a) {
        case Algorithm::KNN: return "KNN";
        case Algorithm::DT: return "DT";
        case Algorithm::RF: return "RF";
        case Algorithm::ANN: return "ANN";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "knn") return Algorithm::KNN;
    if (lower == "dt") return Algorithm::DT;
    if (lower == "rf") return Algorithm::RF;
    if (lower == "ann") return Algorithm::ANN;
    return std::nullopt;
}

void Hyperparams::validate() const {
    if (knn_k == 0) throw ConfigError("knn_k must be positive");
    if (dt_max_depth == 0) throw ConfigError("dt_max_depth must be positive");
    if (dt_min_samples_split == 0) throw ConfigError("dt_min_samples_split must be positive");
    if (rf_trees == 0) throw ConfigError("rf_trees must be positive");
    if (rf_features_per_split == 0 || rf_features_per_split > kInputDim)
        throw ConfigError("rf_features_per_split must be in [1, 20]");
    if (ann_hidden.empty()) throw ConfigError("ann_hidden needs at least one layer");
    for (auto h : ann_hidden)
        if (h == 0) throw ConfigError("ann_hidden sizes must be positive");
    if (!(ann_learning_rate > 0.0)) throw ConfigError("ann_learning_rate must be positive");
    if (!(ann_momentum >= 0.0 && ann_momentum < 1.0)) throw ConfigError("ann_momentum must be in [0, 1)");
    if (ann_epochs == 0) throw ConfigError("ann_epochs must be positive");
    if (ann_batch == 0) throw ConfigError("ann_batch must be positive");
}

void Hyperparams::set(std::string_view key, std::string_view value) {
    if (key == "knn_k") knn_k = parse_value<std::uint32_t>(key, value);
    else if (key == "dt_max_depth") dt_max_depth = parse_value<std::uint32_t>(key, value);
    else if (key == "dt_min_samples_split") dt_min_samples_split = parse_value<std::uint32_t>(key, value);
    else if (key == "rf_trees") rf_trees = parse_value<std::uint32_t>(key, value);
    else if (key == "rf_features_per_split") rf_features_per_split = parse_value<std::uint32_t>(key, value);
    else if (key == "ann_learning_rate") ann_learning_rate = parse_value<double>(key, value);
    else if (key == "ann_momentum") ann_momentum = parse_value<double>(key, value);
    else if (key == "ann_epochs") ann_epochs = parse_value<std::uint32_t>(key, value);
    else if (key == "ann_batch") ann_batch = parse_value<std::uint32_t>(key, value);
    else if (key == "ann_hidden") {
        ann_hidden.clear();
        while (!value.empty()) {
            const auto p = value.find(',');
            ann_hidden.push_back(parse_value<std::uint32_t>(key, value.substr(0, p)));
            value = p == std::string_view::npos ? std::string_view{} : value.substr(p + 1);
        }
    } else {
        throw ConfigError("unknown hyperparameter '" + std::string(key) + "'");
    }
}

std::array<ConditionLabel, kLabelCount> canonical_label_set() {
    std::array<ConditionLabel, kLabelCount> out{};
    for (std::size_t c = 0; c < kLabelCount; ++c) out[c] = label_at(c);
    return out;
}

ForestParams grow_forest(const Matrix& x, std::span<const std::uint8_t> labels, const Hyperparams& hp,
                         std::uint64_t seed, bool parallel) {
    ForestParams forest;
    forest.trees.resize(hp.rf_trees);
    const TreeParams tp{hp.dt_max_depth, hp.dt_min_samples_split, hp.rf_features_per_split};
    const auto n = static_cast<std::uint32_t>(x.rows);
    const auto n_trees = static_cast<std::int64_t>(hp.rf_trees);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t t = 0; t < n_trees; ++t) {
        Rng rng(seed ^ static_cast<std::uint64_t>(t));
        std::uniform_int_distribution<std::uint32_t> draw(0, n - 1);
        std::vector<std::uint32_t> sample(n);
        for (auto& s : sample) s = draw(rng);
        forest.trees[static_cast<std::size_t>(t)] = grow_tree(x, labels, sample, tp, &rng);
    }
    return forest;
}

Model train(Algorithm algorithm, const LabeledDataset& dataset, const Hyperparams& hyperparams, std::uint64_t seed) {
    if (dataset.instances.empty()) throw ConfigError("cannot train on an empty dataset");
    hyperparams.validate();

    Model model;
    model.algorithm = algorithm;
    model.hyperparams = hyperparams;
    model.label_set = canonical_label_set();
    model.standardizer = Standardizer::fit(dataset.instances);
    Matrix x = model.standardizer.transform_all(dataset.instances);
    std::vector<std::uint8_t> y(dataset.instances.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint8_t>(index(dataset.instances[i].label));

    switch (algorithm) {
        case Algorithm::KNN: {
            KnnParams p;
            p.index = std::make_shared<const KdTree>(x);
            p.points = std::move(x);
            p.labels = std::move(y);
            model.params = std::move(p);
            break;
        }
        case Algorithm::DT: {
            std::vector<std::uint32_t> all(x.rows);
            std::iota(all.begin(), all.end(), 0u);
            const TreeParams tp{hyperparams.dt_max_depth, hyperparams.dt_min_samples_split, 0};
            model.params = TreeParamsPayload{grow_tree(x, y, all, tp)};
            break;
        }
        case Algorithm::RF:
            model.params = grow_forest(x, y, hyperparams, seed);
            break;
        case Algorithm::ANN: {
            Rng rng(seed);
            std::vector<std::size_t> sizes{kInputDim};
            sizes.insert(sizes.end(), hyperparams.ann_hidden.begin(), hyperparams.ann_hidden.end());
            sizes.push_back(kLabelCount);
            MlpParams p{Mlp::init(sizes, rng)};
            const SgdParams sgd{hyperparams.ann_learning_rate, hyperparams.ann_momentum, hyperparams.ann_epochs,
                                hyperparams.ann_batch};
            model.trace = train_sgd(p.net, x, y, sgd, rng);
            model.params = std::move(p);
            break;
        }
        default:
            throw ConfigError("unknown algorithm tag");
    }
    return model;
}

Prediction predict(const Model& model, std::span<const double> raw) {
    const auto x = model.standardizer.transform(to_input(raw));
    Prediction out{};
    std::size_t label = 0;
    switch (model.algorithm) {
        case Algorithm::KNN: {
            const auto& p = knn_params(model);
            const auto neighbors = p.index->nearest(x, model.hyperparams.knn_k);
            const Vote v = vote(neighbors, p.labels);
            label = v.label;
            out.scores = v.scores;
            break;
        }
        case Algorithm::DT: {
            out.scores = std::get<TreeParamsPayload>(model.params).tree.leaf_scores(x);
            label = argmax_lowest(out.scores);
            break;
        }
        case Algorithm::RF: {
            const auto& trees = std::get<ForestParams>(model.params).trees;
            ClassScores votes{};
            for (const auto& t : trees) votes[t.predict(x)] += 1.0;
            label = argmax_lowest(votes);
            for (std::size_t c = 0; c < kLabelCount; ++c) out.scores[c] = votes[c] / static_cast<double>(trees.size());
            break;
        }
        case Algorithm::ANN: {
            const auto probs = std::get<MlpParams>(model.params).net.forward(x);
            std::copy(probs.begin(), probs.end(), out.scores.begin());
            label = argmax_lowest(out.scores);
            break;
        }
    }
    out.label = model.label_set[label];
    return out;
}

Prediction predict(const Model& model, const FeatureVector& v) {
    const auto x = v.input();
    return predict(model, std::span<const double>(x));
}

ConditionLabel knn_brute_force(const Model& model, std::span<const double> raw) {
    const auto& p = knn_params(model);
    const auto x = model.standardizer.transform(to_input(raw));
    const auto neighbors = nearest_scan(p.points, x, model.hyperparams.knn_k);
    return model.label_set[vote(neighbors, p.labels).label];
}

ConditionLabel knn_brute_force(const Model& model, const FeatureVector& v) {
    const auto x = v.input();
    return knn_brute_force(model, std::span<const double>(x));
}

std::vector<Prediction> predict_batch(const Model& model, std::span<const LabeledInstance> instances, Execution exec) {
    std::vector<Prediction> out(instances.size());
    const auto n = static_cast<std::int64_t>(instances.size());
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = predict(model, instances[static_cast<std::size_t>(i)].vector);
    return out;
}

double accuracy_on(const Model& model, std::span<const LabeledInstance> instances) {
    if (instances.empty()) return 0.0;
    const auto preds = predict_batch(model, instances);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) hit += preds[i].label == instances[i].label;
    return static_cast<double>(hit) / static_cast<double>(instances.size());
}

}  // namespace hg
