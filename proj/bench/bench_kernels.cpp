// Serial reference kernels against their OpenMP / indexed counterparts.

#include "healthguard/dataset.hpp"
#include "healthguard/knn.hpp"
#include "healthguard/model.hpp"
#include "healthguard/parallel.hpp"

#include <benchmark/benchmark.h>

namespace {

const hg::LabeledDataset& data() {
    static const hg::LabeledDataset ds = [] {
        hg::DatasetRecipe r;
        r.instances = 5000;
        return hg::build_dataset(r);
    }();
    return ds;
}

const hg::Model& model(hg::Algorithm a) {
    static hg::Hyperparams hp = [] {
        hg::Hyperparams h;
        h.rf_trees = 20;
        h.ann_epochs = 5;
        return h;
    }();
    static const hg::Model knn = hg::train(hg::Algorithm::KNN, data(), hp, 0);
    static const hg::Model rf = hg::train(hg::Algorithm::RF, data(), hp, 0);
    return a == hg::Algorithm::KNN ? knn : rf;
}

hg::Matrix standardized() {
    const auto& m = model(hg::Algorithm::KNN);
    return std::get<hg::KnnParams>(m.params).points;
}

void BM_KnnScan(benchmark::State& state) {
    const auto points = standardized();
    std::size_t q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hg::nearest_scan(points, points.row(q), 5));
        q = (q + 97) % points.rows;
    }
}
BENCHMARK(BM_KnnScan);

void BM_KnnKdTree(benchmark::State& state) {
    const auto points = standardized();
    const hg::KdTree tree(points);
    std::size_t q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tree.nearest(points.row(q), 5));
        q = (q + 97) % points.rows;
    }
}
BENCHMARK(BM_KnnKdTree);

void predict_batch(benchmark::State& state, hg::Algorithm a, hg::Execution exec) {
    const auto& m = model(a);
    const auto& ds = data();
    for (auto _ : state) benchmark::DoNotOptimize(hg::predict_batch(m, ds.instances, exec));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * ds.size()));
}
BENCHMARK_CAPTURE(predict_batch, knn_serial, hg::Algorithm::KNN, hg::Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(predict_batch, knn_parallel, hg::Algorithm::KNN, hg::Execution::Parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(predict_batch, rf_serial, hg::Algorithm::RF, hg::Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(predict_batch, rf_parallel, hg::Algorithm::RF, hg::Execution::Parallel)
    ->Unit(benchmark::kMillisecond);

void grow_forest(benchmark::State& state, bool parallel) {
    const auto& m = model(hg::Algorithm::KNN);
    const auto& kp = std::get<hg::KnnParams>(m.params);
    hg::Hyperparams hp;
    hp.rf_trees = 10;
    for (auto _ : state) benchmark::DoNotOptimize(hg::grow_forest(kp.points, kp.labels, hp, 0, parallel));
}
BENCHMARK_CAPTURE(grow_forest, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grow_forest, parallel, true)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    hg::configure_threads_from_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
