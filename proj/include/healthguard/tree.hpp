#pragma once

// CART decision tree: greedy binary threshold splits minimizing weighted Gini.

#include "healthguard/domain.hpp"
#include "healthguard/matrix.hpp"
#include "healthguard/rng.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace hg {

using ClassCounts = std::array<std::uint64_t, kLabelCount>;
using ClassScores = std::array<double, kLabelCount>;

/// 1 - sum p_c^2. Throws DomainError when the counts sum to zero.
double gini(std::span<const std::uint64_t> counts);

struct TreeParams {
    std::uint32_t max_depth = 16;
    std::uint32_t min_samples_split = 2;
    /// Candidate features per split; 0 or >= input width disables subsampling.
    std::uint32_t features_per_split = 0;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t leaf = 0;     // index into DecisionTree::leaves when a leaf

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;    // nodes[0] is the root
    std::vector<ClassScores> leaves;  // class frequencies per leaf

    const ClassScores& leaf_scores(std::span<const double> x) const;
    /// Majority class of the reached leaf; ties go to the lower class index.
    std::size_t predict(std::span<const double> x) const;
    std::uint32_t depth() const;

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

std::size_t argmax_lowest(const ClassScores& scores);

/// Grows a tree on rows `sample` of `x` (repeats allowed, as in a bootstrap).
/// `rng` is only consulted when feature subsampling is active.
DecisionTree grow_tree(const Matrix& x, std::span<const std::uint8_t> labels, std::span<const std::uint32_t> sample,
                       const TreeParams& params, Rng* rng = nullptr);

}  // namespace hg
