#include "healthguard/knn.hpp"

#include "healthguard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace hg {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

std::vector<Neighbor> nearest_scan(const Matrix& points, std::span<const double> query, std::size_t k) {
    if (query.size() != points.cols) throw ContractError("query dimension mismatch");
    std::vector<Neighbor> all(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i)
        all[i] = {squared_distance(points.row(i), query), static_cast<std::uint32_t>(i)};
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    return all;
}

KdTree::KdTree(const Matrix& points, std::size_t leaf_size) : points_(points), ids_(points.rows) {
    std::iota(ids_.begin(), ids_.end(), 0u);
    if (points.rows == 0) return;
    nodes_.reserve(2 * points.rows / std::max<std::size_t>(leaf_size, 1) + 2);
    build(0, static_cast<std::uint32_t>(points.rows), std::max<std::size_t>(leaf_size, 1));
    // permute rows into tree order so leaves scan contiguous memory
    Matrix permuted(points.rows, points.cols);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        const auto src = points.row(ids_[i]);
        std::copy(src.begin(), src.end(), permuted.row(i).begin());
    }
    points_ = std::move(permuted);
}

std::size_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size) {
    const std::size_t dim = points_.cols;
    const std::size_t id = nodes_.size();
    nodes_.push_back({begin, end});
    lo_.resize((id + 1) * dim);
    hi_.resize((id + 1) * dim);
    for (std::size_t j = 0; j < dim; ++j) {
        double lo = points_(ids_[begin], j), hi = lo;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            lo = std::min(lo, points_(ids_[i], j));
            hi = std::max(hi, points_(ids_[i], j));
        }
        lo_[id * dim + j] = lo;
        hi_[id * dim + j] = hi;
    }
    if (end - begin <= leaf_size) return id;

    std::size_t split_dim = 0;
    double spread = -1.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double s = hi_[id * dim + j] - lo_[id * dim + j];
        if (s > spread) {
            spread = s;
            split_dim = j;
        }
    }
    if (spread <= 0.0) return id;  // all points identical

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
        const double va = points_(a, split_dim), vb = points_(b, split_dim);
        return va < vb || (va == vb && a < b);
    });
    const std::size_t left = build(begin, mid, leaf_size);
    const std::size_t right = build(mid, end, leaf_size);
    nodes_[id].leaf = false;
    nodes_[id].left = static_cast<std::uint32_t>(left);
    nodes_[id].right = static_cast<std::uint32_t>(right);
    return id;
}

double KdTree::box_distance(std::size_t node, std::span<const double> q) const {
    // Per-dimension gaps never exceed |q - p| for a point inside the box, and
    // rounding is monotone, so this never exceeds squared_distance(q, p).
    const std::size_t dim = points_.cols;
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        const double lo = lo_[node * dim + j];
        const double hi = hi_[node * dim + j];
        double d = 0.0;
        if (q[j] < lo)
            d = lo - q[j];
        else if (q[j] > hi)
            d = q[j] - hi;
        s += d * d;
    }
    return s;
}

std::vector<Neighbor> KdTree::nearest(std::span<const double> query, std::size_t k) const {
    if (query.size() != points_.cols) throw ContractError("query dimension mismatch");
    k = std::min(k, points_.rows);
    if (k == 0) return {};

    std::priority_queue<Neighbor> best;  // max-heap: top is the current k-th
    auto consider = [&](const Neighbor& n) {
        if (best.size() < k) {
            best.push(n);
        } else if (n < best.top()) {
            best.pop();
            best.push(n);
        }
    };

    struct Pending {
        double bound;
        std::size_t node;
    };
    std::vector<Pending> stack{{box_distance(0, query), 0}};
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        if (best.size() == k && p.bound > best.top().dist2) continue;
        const Node& n = nodes_[p.node];
        if (n.leaf) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) consider({squared_distance(points_.row(i), query), ids_[i]});
            continue;
        }
        const double bl = box_distance(n.left, query);
        const double br = box_distance(n.right, query);
        // push the farther child first so the nearer one is explored first
        if (bl <= br) {
            stack.push_back({br, n.right});
            stack.push_back({bl, n.left});
        } else {
            stack.push_back({bl, n.left});
            stack.push_back({br, n.right});
        }
    }
    std::vector<Neighbor> out(best.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = best.top();
        best.pop();
    }
    return out;
}

Vote vote(std::span<const Neighbor> neighbors, std::span<const std::uint8_t> labels) {
    if (neighbors.empty()) throw ContractError("vote over no neighbours");
    std::array<std::size_t, kLabelCount> count{};
    std::array<double, kLabelCount> dist{};
    for (const auto& n : neighbors) {
        ++count[labels[n.index]];
        dist[labels[n.index]] += std::sqrt(n.dist2);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < kLabelCount; ++c)
        if (count[c] > count[best] || (count[c] == count[best] && dist[c] < dist[best])) best = c;
    Vote v{best, {}};
    for (std::size_t c = 0; c < kLabelCount; ++c)
        v.scores[c] = static_cast<double>(count[c]) / static_cast<double>(neighbors.size());
    return v;
}

}  // namespace hg
