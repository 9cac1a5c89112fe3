#include "healthguard/experiments.hpp"

#include "healthguard/errors.hpp"
#include "healthguard/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace hg {
namespace {

constexpr std::uint64_t kTestStreamSalt = 0x7E57'0000'0000'0004ull;
constexpr std::uint64_t kEpisodeSalt = 0xE915'0DE0'0000'0005ull;

std::vector<ConditionLabel> truth_of(std::span<const LabeledInstance> instances) {
    std::vector<ConditionLabel> out(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) out[i] = instances[i].label;
    return out;
}

struct Trained {
    Model model;
    double seconds;
};

Trained timed_train(Algorithm a, const LabeledDataset& ds, const Hyperparams& hp, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    Model m = train(a, ds, hp, seed);
    const auto t1 = std::chrono::steady_clock::now();
    return {std::move(m), std::chrono::duration<double>(t1 - t0).count()};
}

}  // namespace

const AlgorithmResult& ExperimentResult::of(Algorithm a) const {
    for (const auto& r : algorithms)
        if (r.algorithm == a) return r;
    throw ContractError("algorithm " + std::string(name(a)) + " not in experiment result");
}

AlgorithmResult score(Algorithm algorithm, std::span<const Prediction> predictions,
                      std::span<const LabeledInstance> truth) {
    std::vector<ConditionLabel> pred(predictions.size());
    for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = predictions[i].label;
    const auto labels = truth_of(truth);
    const ConfusionMatrix cm = confusion(pred, labels);

    AlgorithmResult r;
    r.algorithm = algorithm;
    r.all = metrics(cm, View::All);
    const bool any_benign = std::any_of(labels.begin(), labels.end(), is_benign);
    const bool any_malicious = std::any_of(labels.begin(), labels.end(), is_malicious);
    if (any_benign) r.benign = metrics(cm, View::BenignOnly);
    if (any_malicious) r.malicious = metrics(cm, View::MaliciousOnly);
    r.binary = binary_metrics(cm);
    return r;
}

ExperimentResult run_detection_experiment(const LabeledDataset& dataset, std::span<const Algorithm> algorithms,
                                          const Hyperparams& hp, std::uint64_t seed, double train_fraction,
                                          SplitMode mode) {
    const auto [train_set, test_set] = split(dataset, train_fraction, seed, mode);
    if (test_set.instances.empty()) throw ConfigError("test split is empty");
    ExperimentResult out;
    out.experiment = "detection";
    out.seed = seed;
    out.device_mask = dataset.device_mask;
    out.device_count = static_cast<std::uint32_t>(dataset.device_mask.count());
    for (Algorithm a : algorithms) {
        auto trained = timed_train(a, train_set, hp, seed);
        const auto preds = predict_batch(trained.model, test_set.instances);
        AlgorithmResult r = score(a, preds, test_set.instances);
        r.train_seconds = trained.seconds;
        out.algorithms.push_back(std::move(r));
    }
    return out;
}

std::vector<DeviceKind> default_removal_order() {
    return {DeviceKind::HemoglobinMeter, DeviceKind::AlcoholMonitor,   DeviceKind::NeuralHeadset,
            DeviceKind::PulseOximeter,   DeviceKind::RespSweatMonitor, DeviceKind::InsulinPump,
            DeviceKind::HeartBpMonitor};
}

DeviceMask mask_for_count(std::uint32_t count, std::span<const DeviceKind> removal_order) {
    if (count < 1 || count > kDeviceCount) throw ConfigError("device count must be in [1, 8]");
    const std::size_t drop = kDeviceCount - count;
    if (drop > removal_order.size()) throw ConfigError("removal order too short for device count");
    DeviceMask m = DeviceMask::all();
    for (std::size_t i = 0; i < drop; ++i) m = m.without(removal_order[i]);
    if (m.count() != count) throw ConfigError("removal order repeats a device");
    return m;
}

std::vector<ExperimentResult> run_device_ablation(const DatasetRecipe& base, std::span<const Algorithm> algorithms,
                                                  const Hyperparams& hp, const AblationOptions& options) {
    std::vector<ExperimentResult> out;
    for (std::uint32_t count : options.device_counts) {
        const DeviceMask mask = mask_for_count(count, options.removal_order);
        for (std::uint64_t seed : options.seeds) {
            DatasetRecipe recipe = base;
            recipe.devices = mask;
            recipe.seed = seed;
            ExperimentResult r = run_detection_experiment(build_dataset(recipe), algorithms, hp, seed);
            r.experiment = "ablation";
            r.device_count = count;
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::uint32_t episode_span(std::uint32_t kinds, std::uint32_t duration_max) { return kinds * duration_max + kinds; }

std::vector<AttackEvent> concurrent_episode(std::span<const ConditionLabel> kinds, std::uint32_t onset,
                                            DeviceMask devices, std::uint32_t duration_min,
                                            std::uint32_t duration_max, Rng& rng) {
    const auto enabled = devices.devices();
    if (enabled.empty()) throw ConfigError("no enabled devices");
    std::uniform_int_distribution<std::size_t> pick_device(0, enabled.size() - 1);
    std::uniform_int_distribution<std::uint32_t> pick_duration(duration_min, duration_max);

    std::vector<AttackEvent> events;
    std::uint32_t start = onset;
    std::uint32_t end = onset;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i > 0) {
            const std::uint32_t prev_len = events.back().duration_minutes;
            std::uniform_int_distribution<std::uint32_t> lag(1, std::max<std::uint32_t>(1, prev_len - 1));
            start += lag(rng);
        }
        const std::uint32_t new_end = std::max(end + 1, start + pick_duration(rng));
        DeviceKind target = enabled[pick_device(rng)];
        if (kinds[i] == ConditionLabel::TamperedDevice && devices.contains(DeviceKind::SleepMotionWatch))
            target = DeviceKind::SleepMotionWatch;
        events.push_back({kinds[i], target, start, new_end - start});
        end = new_end;
    }
    return events;
}

std::vector<TelemetryStream> simultaneous_test_streams(const DatasetRecipe& base, std::uint32_t kinds,
                                                       std::uint32_t streams, std::uint64_t seed) {
    if (kinds > kAttackLabels.size()) throw ConfigError("at most 3 concurrent attack kinds");
    DatasetRecipe test = base;
    test.segments.clear();
    test.events.clear();
    test.instances = streams * base.scenario_minutes;
    test.seed = derive_seed(seed, kinds, kTestStreamSalt);
    const auto configs = test.scenarios();
    const std::uint32_t span = episode_span(kinds, base.duration_max);
    if (kinds > 0 && span >= base.scenario_minutes) throw ConfigError("scenario too short for a concurrent episode");
    const double rate = base.attack_rate();

    std::vector<TelemetryStream> out(configs.size());
    const auto n = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& cfg = configs[static_cast<std::size_t>(i)];
        TelemetryStream benign = generate_benign(cfg);
        Rng rng(derive_seed(test.seed, static_cast<std::uint64_t>(i), kEpisodeSalt));
        std::vector<AttackEvent> events;
        if (kinds > 0) {
            const std::uint32_t room = benign.minutes() - span;
            std::vector<std::uint32_t> starts;
            for (std::uint32_t onset : sample_attack_onsets(rate, room, rng()))
                if (starts.empty() || onset >= starts.back() + span) starts.push_back(onset);
            if (starts.empty()) starts.push_back(std::uniform_int_distribution<std::uint32_t>(0, room - 1)(rng));
            for (std::uint32_t s : starts) {
                std::vector<ConditionLabel> pool(kAttackLabels.begin(), kAttackLabels.end());
                std::shuffle(pool.begin(), pool.end(), rng);
                pool.resize(kinds);
                const auto ep = concurrent_episode(pool, s, cfg.enabled_devices, base.duration_min, base.duration_max, rng);
                events.insert(events.end(), ep.begin(), ep.end());
            }
        }
        out[static_cast<std::size_t>(i)] = apply_attacks(std::move(benign), std::move(events), rng());
    }
    return out;
}

std::vector<ExperimentResult> run_simultaneous_attacks(const DatasetRecipe& base, std::span<const Algorithm> algorithms,
                                                       const Hyperparams& hp, const SimultaneousOptions& options) {
    std::vector<std::uint32_t> kinds_list;
    if (options.include_control) kinds_list.push_back(0);
    for (auto k : options.concurrent_kinds) {
        if (k < 1 || k > 3) throw ConfigError("concurrent attack kinds must be in {1, 2, 3}");
        kinds_list.push_back(k);
    }

    std::vector<ExperimentResult> out;
    for (std::uint64_t seed : options.seeds) {
        DatasetRecipe recipe = base;
        recipe.seed = seed;
        const LabeledDataset train_set = build_dataset(recipe);
        std::vector<Trained> models;
        for (Algorithm a : algorithms) models.push_back(timed_train(a, train_set, hp, seed));

        for (std::uint32_t k : kinds_list) {
            const auto streams = simultaneous_test_streams(recipe, k, options.test_streams, seed);
            std::vector<LabeledInstance> test;
            std::uint32_t offset = 0;
            for (const auto& s : streams) {
                const auto part = stream_to_instances(s, recipe.devices, offset);
                test.insert(test.end(), part.begin(), part.end());
                offset += s.minutes();
            }
            ExperimentResult r;
            r.experiment = "simultaneous";
            r.seed = seed;
            r.attack_kinds = k;
            r.device_mask = recipe.devices;
            r.device_count = static_cast<std::uint32_t>(recipe.devices.count());
            for (std::size_t m = 0; m < models.size(); ++m) {
                const auto preds = predict_batch(models[m].model, test);
                AlgorithmResult ar = score(algorithms[m], preds, test);
                ar.train_seconds = models[m].seconds;
                r.algorithms.push_back(std::move(ar));
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(s.n - 1)) / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

std::map<CellKey, CellSummary> aggregate(std::span<const ExperimentResult> results) {
    struct Acc {
        std::vector<double> a, p, r, f;
    };
    std::map<CellKey, Acc> acc;
    auto add = [&](const CellKey& key, double a, double p, double r, double f) {
        auto& x = acc[key];
        x.a.push_back(a);
        x.p.push_back(p);
        x.r.push_back(r);
        x.f.push_back(f);
    };
    for (const auto& res : results) {
        for (const auto& ar : res.algorithms) {
            auto key = [&](std::string_view view) {
                return CellKey{res.experiment, res.device_count, res.attack_kinds, ar.algorithm, std::string(view)};
            };
            for (const auto* rep : {&ar.all, &ar.benign, &ar.malicious})
                if (*rep)
                    add(key(name((*rep)->view)), (*rep)->accuracy, (*rep)->macro_precision, (*rep)->macro_recall,
                        (*rep)->macro_f1);
            add(key("Binary"), ar.binary.accuracy, ar.binary.precision, ar.binary.recall, ar.binary.f1);
        }
    }
    std::map<CellKey, CellSummary> out;
    for (const auto& [k, v] : acc) out[k] = {summarize(v.a), summarize(v.p), summarize(v.r), summarize(v.f)};
    return out;
}

}  // namespace hg
