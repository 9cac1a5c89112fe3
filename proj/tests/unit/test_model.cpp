#include "healthguard/dataset.hpp"
#include "healthguard/errors.hpp"
#include "healthguard/model.hpp"
#include "healthguard/model_io.hpp"
#include "healthguard/standardizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

using namespace hg;

namespace {

const LabeledDataset& dataset() {
    static const LabeledDataset ds = [] {
        DatasetRecipe r;
        r.instances = 3000;
        r.seed = 21;
        return build_dataset(r);
    }();
    return ds;
}

Hyperparams fast() {
    Hyperparams hp;
    hp.rf_trees = 10;
    hp.ann_epochs = 5;
    hp.ann_hidden = {16};
    return hp;
}

std::vector<std::array<double, kInputDim>> random_inputs(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const auto& ds = dataset();
    std::uniform_int_distribution<std::size_t> pick(0, ds.size() - 1);
    std::normal_distribution<double> jitter(0.0, 2.0);
    std::vector<std::array<double, kInputDim>> out(n);
    for (auto& x : out) {
        x = ds.instances[pick(rng)].vector.input();
        for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] += jitter(rng);
    }
    return out;
}

}  // namespace

TEST(Standardizer, RoundTripAndConstantColumns) {
    const auto& ds = dataset();
    const auto s = Standardizer::fit(ds.instances);
    for (double sd : s.stddev) EXPECT_GT(sd, 0.0);
    for (std::size_t i = 0; i < 50; ++i) {
        const auto raw = ds.instances[i].vector.input();
        const auto back = s.inverse(s.transform(raw));
        for (std::size_t j = 0; j < kInputDim; ++j) EXPECT_NEAR(back[j], raw[j], 1e-9);
        const auto z = s.transform(raw);
        for (std::size_t j = kFeatureCount; j < kInputDim; ++j) EXPECT_EQ(z[j], raw[j]);
    }
    LabeledDataset flat;
    for (int i = 0; i < 5; ++i) flat.instances.push_back({FeatureVector{}, ConditionLabel::Walking});
    for (double sd : Standardizer::fit(flat.instances).stddev) EXPECT_EQ(sd, 1.0);
}

TEST(Hyperparams, SetAndValidate) {
    Hyperparams hp;
    hp.set("knn_k", "7");
    hp.set("ann_hidden", "32,16");
    hp.set("ann_learning_rate", "0.05");
    EXPECT_EQ(hp.knn_k, 7u);
    EXPECT_EQ(hp.ann_hidden, (std::vector<std::uint32_t>{32, 16}));
    EXPECT_DOUBLE_EQ(hp.ann_learning_rate, 0.05);
    EXPECT_THROW(hp.set("nope", "1"), ConfigError);
    EXPECT_THROW(hp.set("knn_k", "x"), ConfigError);
    hp.rf_features_per_split = 21;
    EXPECT_THROW(hp.validate(), ConfigError);
    EXPECT_EQ(Hyperparams{}.rf_features_per_split, 4u);
}

TEST(Model, AlgorithmNames) {
    EXPECT_EQ(parse_algorithm("knn"), Algorithm::KNN);
    EXPECT_EQ(parse_algorithm("RF"), Algorithm::RF);
    EXPECT_FALSE(parse_algorithm("xyz"));
    for (auto a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(name(a)), a);
}

TEST(Model, EmptyDatasetRejected) {
    for (auto a : kAllAlgorithms) EXPECT_THROW(train(a, LabeledDataset{}, Hyperparams{}, 0), ConfigError);
}

TEST(Model, PredictContracts) {
    const auto& ds = dataset();
    for (auto a : kAllAlgorithms) {
        const auto m = train(a, ds, fast(), 3);
        const std::vector<double> wrong(19, 0.0);
        EXPECT_THROW(predict(m, wrong), ContractError);
        for (const auto& x : random_inputs(50, 4)) {
            const auto p = predict(m, x);
            EXPECT_LT(index(p.label), kLabelCount);
            double sum = 0;
            for (double s : p.scores) {
                EXPECT_TRUE(std::isfinite(s));
                sum += s;
            }
            EXPECT_NEAR(sum, 1.0, 1e-9) << name(a);
        }
    }
}

TEST(Model, TrainingIsDeterministic) {
    const auto& ds = dataset();
    for (auto a : kAllAlgorithms)
        EXPECT_EQ(serialize_model(train(a, ds, fast(), 8)), serialize_model(train(a, ds, fast(), 8))) << name(a);
}

TEST(Model, BatchSerialEqualsParallel) {
    const auto& ds = dataset();
    for (auto a : kAllAlgorithms) {
        const auto m = train(a, ds, fast(), 1);
        const auto p = predict_batch(m, ds.instances, Execution::Parallel);
        const auto s = predict_batch(m, ds.instances, Execution::Serial);
        ASSERT_EQ(p.size(), s.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_EQ(p[i].label, s[i].label);
            EXPECT_EQ(p[i].scores, s[i].scores);
        }
    }
}

TEST(Model, KnnMatchesBruteForce) {
    const auto m = train(Algorithm::KNN, dataset(), Hyperparams{}, 0);
    for (const auto& x : random_inputs(300, 5)) EXPECT_EQ(predict(m, x).label, knn_brute_force(m, x));
}

TEST(Model, OneNearestNeighbourRecallsTraining) {
    Hyperparams hp;
    hp.knn_k = 1;
    const auto& ds = dataset();
    const auto m = train(Algorithm::KNN, ds, hp, 0);
    EXPECT_DOUBLE_EQ(accuracy_on(m, ds.instances), 1.0);
}

// z-scores do not change when a raw column is rescaled in train and test alike
TEST(Model, KnnScaleInvariance) {
    const auto& ds = dataset();
    auto scaled = ds;
    for (auto& i : scaled.instances) i.vector.values[index(FeatureKind::Glucose)] *= 3.7;
    const auto a = train(Algorithm::KNN, ds, Hyperparams{}, 0);
    const auto b = train(Algorithm::KNN, scaled, Hyperparams{}, 0);
    for (const auto& x : random_inputs(200, 6)) {
        auto y = x;
        y[index(FeatureKind::Glucose)] *= 3.7;
        EXPECT_EQ(predict(a, x).label, predict(b, y).label);
    }
}

TEST(Model, AnnLossDrops) {
    const auto m = train(Algorithm::ANN, dataset(), fast(), 2);
    ASSERT_TRUE(m.trace);
    EXPECT_LT(m.trace->final_loss, m.trace->initial_loss);
}

TEST(ModelIo, RoundTripPredictionsBitIdentical) {
    const auto& ds = dataset();
    const auto inputs = random_inputs(1000, 7);
    for (auto a : kAllAlgorithms) {
        const auto m = train(a, ds, fast(), 4);
        const auto bytes = serialize_model(m);
        const auto back = deserialize_model(bytes);
        EXPECT_EQ(serialize_model(back), bytes);
        EXPECT_EQ(back.hyperparams, m.hyperparams);
        EXPECT_EQ(back.standardizer, m.standardizer);
        for (const auto& x : inputs) {
            const auto p = predict(m, x);
            const auto q = predict(back, x);
            EXPECT_EQ(p.label, q.label);
            EXPECT_EQ(std::memcmp(p.scores.data(), q.scores.data(), sizeof p.scores), 0);
        }
    }
}

TEST(ModelIo, HeaderAndCorruption) {
    const auto m = train(Algorithm::DT, dataset(), fast(), 0);
    auto bytes = serialize_model(m);
    ASSERT_GE(bytes.size(), 11u);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 7), "HGMODEL");
    EXPECT_EQ(bytes[7], 1);
    EXPECT_EQ(bytes[8] | bytes[9] | bytes[10], 0);

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    try {
        deserialize_model(bad_magic);
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }

    auto bad_version = bytes;
    bad_version[7] = 2;
    EXPECT_THROW(deserialize_model(bad_version), FormatError);

    for (std::size_t cut : {std::size_t{3}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_THROW(deserialize_model(truncated), FormatError) << cut;
    }
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(deserialize_model(trailing), FormatError);
}

TEST(ModelIo, FileErrors) {
    EXPECT_THROW(load_model("/nonexistent/model.bin"), IoError);
    const auto m = train(Algorithm::DT, dataset(), fast(), 0);
    EXPECT_THROW(save_model(m, "/nonexistent/dir/model.bin"), IoError);
}
