#include "healthguard/standardizer.hpp"

#include "healthguard/errors.hpp"

#include <cmath>

namespace hg {
namespace {
constexpr double kMinSigma = 1e-12;
}

Standardizer Standardizer::fit(std::span<const LabeledInstance> instances) {
    if (instances.empty()) throw ConfigError("cannot fit standardizer on an empty dataset");
    Standardizer s;
    const double n = static_cast<double>(instances.size());
    for (const auto& inst : instances)
        for (std::size_t f = 0; f < kFeatureCount; ++f) s.mean[f] += inst.vector.values[f];
    for (auto& m : s.mean) m /= n;
    for (const auto& inst : instances)
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double d = inst.vector.values[f] - s.mean[f];
            s.stddev[f] += d * d;
        }
    for (auto& sd : s.stddev) {
        sd = std::sqrt(sd / n);
        if (!(sd > kMinSigma)) sd = 1.0;
    }
    return s;
}

Standardizer Standardizer::identity() {
    Standardizer s;
    s.stddev.fill(1.0);
    return s;
}

std::array<double, kInputDim> Standardizer::transform(const std::array<double, kInputDim>& raw) const {
    auto x = raw;
    for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = (raw[f] - mean[f]) / stddev[f];
    return x;
}

std::array<double, kInputDim> Standardizer::inverse(const std::array<double, kInputDim>& scaled) const {
    auto x = scaled;
    for (std::size_t f = 0; f < kFeatureCount; ++f) x[f] = scaled[f] * stddev[f] + mean[f];
    return x;
}

Matrix Standardizer::transform_all(std::span<const LabeledInstance> instances) const {
    Matrix m(instances.size(), kInputDim);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto x = transform(instances[i].vector.input());
        std::copy(x.begin(), x.end(), m.row(i).begin());
    }
    return m;
}

}  // namespace hg
