#include "healthguard/tree.hpp"

#include "healthguard/errors.hpp"

#include <algorithm>
#include <numeric>

namespace hg {
namespace {

using u128 = unsigned __int128;

// Weighted child impurity n_L*g_L + n_R*g_R = n - (S_L/n_L + S_R/n_R) with
// S = sum of squared class counts. Minimizing it means maximizing the
// fraction below, kept exact so ties resolve by the documented order.
struct SplitScore {
    std::uint64_t num = 0;  // S_L*n_R + S_R*n_L
    std::uint64_t den = 1;  // n_L*n_R

    bool better_than(const SplitScore& o) const { return u128(num) * o.den > u128(o.num) * den; }
    bool equals(const SplitScore& o) const { return u128(num) * o.den == u128(o.num) * den; }
};

struct Candidate {
    bool found = false;
    SplitScore score;
    std::size_t feature = 0;
    double threshold = 0.0;
};

struct Frame {
    std::uint32_t node;
    std::size_t begin;
    std::size_t end;
    std::uint32_t depth;
};

double midpoint(double lo, double hi) {
    const double t = lo + 0.5 * (hi - lo);
    return t < hi ? t : lo;
}

}  // namespace

double gini(std::span<const std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw DomainError("gini of an empty node");
    double sum = 0.0;
    for (auto c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum += p * p;
    }
    return 1.0 - sum;
}

std::size_t argmax_lowest(const ClassScores& scores) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;
    return best;
}

const ClassScores& DecisionTree::leaf_scores(std::span<const double> x) const {
    const TreeNode* n = &nodes.front();
    while (!n->is_leaf()) n = &nodes[x[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left : n->right];
    return leaves[n->leaf];
}

std::size_t DecisionTree::predict(std::span<const double> x) const { return argmax_lowest(leaf_scores(x)); }

std::uint32_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::uint32_t> d(nodes.size(), 0);
    std::uint32_t best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        best = std::max(best, d[i]);
        if (!nodes[i].is_leaf()) d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
    }
    return best;
}

DecisionTree grow_tree(const Matrix& x, std::span<const std::uint8_t> labels, std::span<const std::uint32_t> sample,
                       const TreeParams& params, Rng* rng) {
    if (sample.empty()) throw ConfigError("cannot grow a tree on an empty sample");
    const std::size_t dim = x.cols;
    const bool subsample = params.features_per_split > 0 && params.features_per_split < dim;
    if (subsample && !rng) throw ContractError("feature subsampling needs an rng");

    std::vector<std::uint32_t> idx(sample.begin(), sample.end());
    std::vector<std::pair<double, std::uint32_t>> keyed;
    keyed.reserve(idx.size());
    std::vector<std::size_t> feature_order(dim);
    std::iota(feature_order.begin(), feature_order.end(), std::size_t{0});

    DecisionTree tree;
    tree.nodes.emplace_back();
    std::vector<Frame> stack{{0, 0, idx.size(), 0}};

    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        const std::size_t n = fr.end - fr.begin;

        ClassCounts counts{};
        for (std::size_t i = fr.begin; i < fr.end; ++i) ++counts[labels[idx[i]]];
        const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;

        Candidate best;
        if (!pure && fr.depth < params.max_depth && n >= params.min_samples_split && n >= 2) {
            if (subsample) std::shuffle(feature_order.begin(), feature_order.end(), *rng);
            std::size_t evaluated = 0;
            std::uint64_t total_sq = 0;
            for (auto c : counts) total_sq += c * c;

            for (std::size_t fi = 0; fi < dim; ++fi) {
                if (subsample && evaluated >= params.features_per_split) break;
                const std::size_t f = feature_order[fi];
                keyed.clear();
                double lo = x(idx[fr.begin], f), hi = lo;
                for (std::size_t i = fr.begin; i < fr.end; ++i) {
                    const double v = x(idx[i], f);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    keyed.emplace_back(v, idx[i]);
                }
                if (lo == hi) continue;  // constant in this node
                ++evaluated;
                std::sort(keyed.begin(), keyed.end());

                ClassCounts left{};
                std::uint64_t sq_left = 0;
                std::uint64_t sq_right = total_sq;
                for (std::size_t i = 0; i + 1 < n; ++i) {
                    const std::uint8_t c = labels[keyed[i].second];
                    sq_left += 2 * left[c] + 1;
                    sq_right -= 2 * (counts[c] - left[c]) - 1;
                    ++left[c];
                    const double v = keyed[i].first;
                    const double v_next = keyed[i + 1].first;
                    if (v == v_next) continue;
                    const std::uint64_t n_left = i + 1;
                    const std::uint64_t n_right = n - n_left;
                    const SplitScore s{sq_left * n_right + sq_right * n_left, n_left * n_right};
                    if (!best.found || s.better_than(best.score) || (s.equals(best.score) && f < best.feature)) {
                        best = {true, s, f, midpoint(v, v_next)};
                    }
                }
            }
        }

        TreeNode& node = tree.nodes[fr.node];
        if (!best.found) {
            ClassScores dist{};
            for (std::size_t c = 0; c < kLabelCount; ++c)
                dist[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
            node.leaf = static_cast<std::uint32_t>(tree.leaves.size());
            tree.leaves.push_back(dist);
            continue;
        }

        const auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(fr.begin),
                                           idx.begin() + static_cast<std::ptrdiff_t>(fr.end),
                                           [&](std::uint32_t r) { return x(r, best.feature) <= best.threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - idx.begin());
        const auto left_id = static_cast<std::uint32_t>(tree.nodes.size());
        node.feature = static_cast<std::int32_t>(best.feature);
        node.threshold = best.threshold;
        node.left = left_id;
        node.right = left_id + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        stack.push_back({left_id + 1, mid, fr.end, fr.depth + 1});
        stack.push_back({left_id, fr.begin, mid, fr.depth + 1});
    }
    return tree;
}

}  // namespace hg
