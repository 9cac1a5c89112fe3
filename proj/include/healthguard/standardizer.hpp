#pragma once

#include "healthguard/domain.hpp"
#include "healthguard/matrix.hpp"
#include "healthguard/pipeline.hpp"

#include <array>
#include <span>

namespace hg {

/// Z-scores the 12 feature columns with training statistics. Availability
/// flags pass through unchanged. Constant columns get sigma = 1.
struct Standardizer {
    std::array<double, kFeatureCount> mean{};
    std::array<double, kFeatureCount> stddev{};

    static Standardizer fit(std::span<const LabeledInstance> instances);
    static Standardizer identity();

    std::array<double, kInputDim> transform(const std::array<double, kInputDim>& raw) const;
    std::array<double, kInputDim> inverse(const std::array<double, kInputDim>& scaled) const;
    /// One standardized row per instance.
    Matrix transform_all(std::span<const LabeledInstance> instances) const;

    friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

}  // namespace hg
