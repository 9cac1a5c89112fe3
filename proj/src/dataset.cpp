#include "healthguard/dataset.hpp"

#include "healthguard/errors.hpp"
#include "healthguard/rng.hpp"

#include <algorithm>
#include <numeric>

namespace hg {
namespace {
constexpr std::uint64_t kConditionShuffleSalt = 0xC0DD'1710'0000'0002ull;
constexpr std::uint64_t kAttackSalt = 0xA77A'C4ED'0000'0003ull;
}  // namespace

double DatasetRecipe::attack_rate() const {
    if (rate_per_hour) return *rate_per_hour;
    if (malicious_fraction <= 0.0) return 0.0;
    const std::uint32_t horizon = segments.empty() ? scenario_minutes : 0;
    std::uint32_t script = 0;
    for (const auto& s : segments) script += s.minutes;
    return rate_for_attack_fraction(malicious_fraction, horizon ? horizon : script, duration_min, duration_max);
}

void DatasetRecipe::validate() const {
    if (devices.empty()) throw ConfigError("no devices enabled");
    if (!(noise_scale >= 0.0)) throw ConfigError("noise_scale must be nonnegative");
    if (!(malicious_fraction >= 0.0 && malicious_fraction < 1.0))
        throw ConfigError("malicious_fraction must be in [0, 1)");
    if (segments.empty()) {
        if (instances == 0) throw ConfigError("instances must be positive");
        if (scenario_minutes == 0 || segment_minutes == 0)
            throw ConfigError("scenario_minutes and segment_minutes must be positive");
        if (!events.empty()) throw ConfigError("explicit events require an explicit segments script");
    }
    if (threats.empty()) throw ConfigError("no threats enabled");
    if (duration_min < 1 || duration_min > duration_max)
        throw ConfigError("attack duration range must satisfy 1 <= min <= max");
}

std::vector<ScenarioConfig> DatasetRecipe::scenarios() const {
    validate();
    if (!segments.empty()) return {ScenarioConfig{segments, seed, devices, noise_scale}};

    const std::uint32_t n_segments = (instances + segment_minutes - 1) / segment_minutes;
    std::vector<ConditionLabel> conditions(n_segments);
    for (std::uint32_t i = 0; i < n_segments; ++i) conditions[i] = label_at(i % kBenignCount);
    Rng rng(derive_seed(seed, 0, kConditionShuffleSalt));
    std::shuffle(conditions.begin(), conditions.end(), rng);

    std::vector<ScenarioConfig> out;
    std::uint32_t produced = 0;
    std::size_t next_segment = 0;
    for (std::uint64_t s = 0; produced < instances; ++s) {
        const std::uint32_t length = std::min(scenario_minutes, instances - produced);
        ScenarioConfig cfg;
        cfg.seed = seed ^ s;
        cfg.enabled_devices = devices;
        cfg.noise_scale = noise_scale;
        for (std::uint32_t used = 0; used < length;) {
            const std::uint32_t len = std::min(segment_minutes, length - used);
            cfg.segments.push_back({conditions[next_segment++ % n_segments], len});
            used += len;
        }
        produced += length;
        out.push_back(std::move(cfg));
    }
    return out;
}

AttackConfig DatasetRecipe::attack_config(std::size_t scenario_index) const {
    AttackConfig ac;
    ac.rate_per_hour = attack_rate();
    ac.duration_min = duration_min;
    ac.duration_max = duration_max;
    ac.enabled_threats = threats;
    ac.seed = derive_seed(seed, scenario_index, kAttackSalt);
    return ac;
}

BuiltDataset build_dataset_with_events(const DatasetRecipe& recipe) {
    const auto configs = recipe.scenarios();
    const std::size_t n = configs.size();
    std::vector<std::vector<LabeledInstance>> parts(n);
    BuiltDataset out;
    out.events.resize(n);
    out.scenario_offsets.resize(n);
    std::uint32_t offset = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.scenario_offsets[i] = offset;
        offset += configs[i].total_minutes();
    }

    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            const TelemetryStream benign = generate_benign(configs[i]);
            AttackConfig ac = recipe.attack_config(i);
            ac.duration_max = std::min(ac.duration_max, benign.minutes());
            ac.duration_min = std::min(ac.duration_min, ac.duration_max);
            std::vector<AttackEvent> events = recipe.events.empty() ? plan_attacks(benign, ac) : recipe.events;
            const TelemetryStream attacked = apply_attacks(benign, std::move(events), ac.seed);
            parts[i] = stream_to_instances(attacked, recipe.devices, out.scenario_offsets[i]);
            out.events[i] = attacked.events;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw ConfigError(e);

    out.dataset.device_mask = recipe.devices;
    out.dataset.instances.reserve(offset);
    for (auto& p : parts) out.dataset.instances.insert(out.dataset.instances.end(), p.begin(), p.end());
    return out;
}

LabeledDataset build_dataset(const DatasetRecipe& recipe) { return build_dataset_with_events(recipe).dataset; }

}  // namespace hg
