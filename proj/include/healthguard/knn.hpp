#pragma once

// Exact k-nearest-neighbour search. Neighbours are ordered by (squared
// distance, training index), so the exhaustive scan and the k-d tree return
// identical sets, ties included.

#include "healthguard/matrix.hpp"
#include "healthguard/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hg {

struct Neighbor {
    double dist2;
    std::uint32_t index;

    friend bool operator<(const Neighbor& a, const Neighbor& b) {
        return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Exhaustive scan over every row of `points`. Reference implementation.
std::vector<Neighbor> nearest_scan(const Matrix& points, std::span<const double> query, std::size_t k);

class KdTree {
public:
    KdTree() = default;
    explicit KdTree(const Matrix& points, std::size_t leaf_size = 16);

    std::vector<Neighbor> nearest(std::span<const double> query, std::size_t k) const;
    std::size_t size() const { return points_.rows; }

private:
    struct Node {
        std::uint32_t begin, end;       // range in points_ order
        std::uint32_t left = 0, right = 0;
        bool leaf = true;
    };
    std::size_t build(std::uint32_t begin, std::uint32_t end, std::size_t leaf_size);
    double box_distance(std::size_t node, std::span<const double> q) const;

    Matrix points_;                  // rows permuted into tree order
    std::vector<std::uint32_t> ids_;  // original row index of each permuted row
    std::vector<Node> nodes_;
    std::vector<double> lo_, hi_;    // bounding box per node, nodes_.size() x dim
};

struct Vote {
    std::size_t label;
    ClassScores scores;  // vote fractions
};

/// Majority vote; ties go to the smaller summed distance, then the lower class.
Vote vote(std::span<const Neighbor> neighbors, std::span<const std::uint8_t> labels);

}  // namespace hg
