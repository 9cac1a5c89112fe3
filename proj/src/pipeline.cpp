#include "healthguard/pipeline.hpp"

#include "healthguard/errors.hpp"
#include "healthguard/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hg {
namespace {

void check_order(const std::vector<Reading>& list, DeviceKind d) {
    for (std::size_t i = 1; i < list.size(); ++i)
        if (list[i].t_seconds <= list[i - 1].t_seconds)
            throw IntegrityError("readings of " + std::string(name(d)) + " out of order at t=" +
                                 std::to_string(list[i].t_seconds));
    for (const auto& r : list)
        if (r.device != d) throw IntegrityError("reading filed under the wrong device");
}

std::array<double, kMaxDeviceFeatures> midpoints(DeviceKind d) {
    std::array<double, kMaxDeviceFeatures> out{};
    const auto feats = device_features(d);
    for (std::size_t k = 0; k < feats.size(); ++k) out[k] = nominal_range(feats[k]).midpoint();
    return out;
}

}  // namespace

std::array<double, kInputDim> FeatureVector::input() const {
    std::array<double, kInputDim> x{};
    std::copy(values.begin(), values.end(), x.begin());
    for (std::size_t d = 0; d < kDeviceCount; ++d) x[kFeatureCount + d] = availability[d] ? 1.0 : 0.0;
    return x;
}

std::array<std::size_t, kLabelCount> LabeledDataset::label_counts() const {
    std::array<std::size_t, kLabelCount> counts{};
    for (const auto& inst : instances) ++counts[index(inst.label)];
    return counts;
}

DeviceReadings collect(const TelemetryStream& stream) {
    DeviceReadings out;
    for (DeviceKind d : kAllDevices) {
        check_order(stream.of(d), d);
        out[index(d)] = stream.of(d);
    }
    return out;
}

DeviceReadings collect(std::span<const Reading> log) {
    DeviceReadings out;
    for (const auto& r : log) out[index(r.device)].push_back(r);
    for (DeviceKind d : kAllDevices) check_order(out[index(d)], d);
    return out;
}

DeviceMinutes resample_per_minute(std::span<const Reading> readings, DeviceKind device, std::uint32_t minutes) {
    const auto feats = device_features(device);
    DeviceMinutes out;
    out.device = device;
    out.values.resize(minutes);
    out.available.assign(minutes, 0);

    auto previous = midpoints(device);
    std::size_t pos = 0;
    for (std::uint32_t m = 0; m < minutes; ++m) {
        const std::uint32_t lo = m * 60u;
        const std::uint32_t hi = lo + 60u;
        while (pos < readings.size() && readings[pos].t_seconds < lo) ++pos;
        std::size_t end = pos;
        while (end < readings.size() && readings[end].t_seconds < hi) ++end;

        if (end == pos) {
            out.values[m] = previous;
            continue;
        }
        const double n = static_cast<double>(end - pos);
        std::array<double, kMaxDeviceFeatures> v{};
        for (std::size_t k = 0; k < feats.size(); ++k) {
            if (is_categorical(feats[k])) {
                std::array<int, 3> votes{};
                for (std::size_t i = pos; i < end; ++i)
                    ++votes[static_cast<std::size_t>(std::clamp(std::lround(readings[i].values[k]), 0L, 2L))];
                v[k] = static_cast<double>(std::max_element(votes.begin(), votes.end()) - votes.begin());
            } else {
                double sum = 0.0;
                for (std::size_t i = pos; i < end; ++i) sum += readings[i].values[k];
                v[k] = sum / n;
            }
        }
        out.values[m] = v;
        out.available[m] = 1;
        previous = v;
        pos = end;
    }
    return out;
}

std::vector<FeatureVector> merge(std::span<const DeviceMinutes> series, DeviceMask mask, std::uint32_t first_minute) {
    std::array<const DeviceMinutes*, kDeviceCount> by_device{};
    std::optional<std::size_t> span;
    for (const auto& s : series) {
        if (!mask.contains(s.device)) continue;
        if (by_device[index(s.device)]) throw IntegrityError("duplicate series for " + std::string(name(s.device)));
        if (s.available.size() != s.values.size()) throw IntegrityError("series flag/value length mismatch");
        if (span && *span != s.minutes()) throw IntegrityError("device series cover different minute spans");
        span = s.minutes();
        by_device[index(s.device)] = &s;
    }
    for (DeviceKind d : kAllDevices)
        if (mask.contains(d) && !by_device[index(d)])
            throw IntegrityError("no series for enabled device " + std::string(name(d)));
    if (!span) return {};

    std::vector<FeatureVector> out(*span);
    for (std::size_t m = 0; m < *span; ++m) {
        FeatureVector& fv = out[m];
        fv.minute = first_minute + static_cast<std::uint32_t>(m);
        for (DeviceKind d : kAllDevices) {
            const auto feats = device_features(d);
            const DeviceMinutes* s = by_device[index(d)];
            const auto vals = s ? s->values[m] : midpoints(d);
            for (std::size_t k = 0; k < feats.size(); ++k) fv.values[index(feats[k])] = vals[k];
            fv.availability[index(d)] = s ? s->available[m] : 1;
        }
    }
    return out;
}

std::vector<LabeledInstance> stream_to_instances(const TelemetryStream& stream, DeviceMask mask,
                                                 std::uint32_t first_minute) {
    const DeviceReadings grouped = collect(stream);
    std::vector<DeviceMinutes> series;
    for (DeviceKind d : kAllDevices)
        if (mask.contains(d)) series.push_back(resample_per_minute(grouped[index(d)], d, stream.minutes()));
    const auto vectors = merge(series, mask, first_minute);
    std::vector<LabeledInstance> out;
    out.reserve(vectors.size());
    for (std::size_t m = 0; m < vectors.size(); ++m) out.push_back({vectors[m], stream.ground_truth[m]});
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset, double train_fraction,
                                                std::uint64_t seed, SplitMode mode) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw DomainError("train fraction must be in (0, 1)");

    std::array<std::vector<std::size_t>, kLabelCount> by_label;
    for (std::size_t i = 0; i < dataset.instances.size(); ++i)
        by_label[index(dataset.instances[i].label)].push_back(i);

    std::vector<std::uint8_t> in_train(dataset.instances.size(), 0);
    Rng rng(seed);
    for (std::size_t c = 0; c < kLabelCount; ++c) {
        auto& idx = by_label[c];
        if (idx.empty()) continue;
        if (mode == SplitMode::Literal && is_malicious(label_at(c))) continue;
        if (mode == SplitMode::Stratified && idx.size() < 2)
            throw IntegrityError("label " + std::string(name(label_at(c))) + " has fewer than 2 instances");
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t j = 0; j < n_train; ++j) in_train[idx[j]] = 1;
    }

    LabeledDataset train;
    LabeledDataset test;
    train.device_mask = test.device_mask = dataset.device_mask;
    train.schema_version = test.schema_version = dataset.schema_version;
    for (std::size_t i = 0; i < dataset.instances.size(); ++i)
        (in_train[i] ? train : test).instances.push_back(dataset.instances[i]);
    return {std::move(train), std::move(test)};
}

}  // namespace hg
