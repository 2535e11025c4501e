#ifndef PITCHTRACK_TEAM_KNN_HPP
#define PITCHTRACK_TEAM_KNN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "../core/detection.hpp"
#include "../core/error.hpp"

namespace pitchtrack {

struct Neighbor {
    std::size_t index;
    double distance;
};

/// k nearest neighbours of every point, self excluded, nearest first.
struct NeighborGraph {
    std::size_t k = 0;
    std::vector<std::vector<Neighbor>> rows;

    std::size_t size() const { return rows.size(); }
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/**
 * Exact brute-force k-NN under Euclidean distance.
 *
 * Equal distances are ordered by the lower point index.
 */
inline NeighborGraph knn_graph(std::span<const std::vector<double>> points, std::size_t k) {
    if (k < 2) {
        throw InsufficientData("knn_graph needs k >= 2");
    }
    if (points.size() < k + 1) {
        throw InsufficientData("knn_graph needs at least k+1 = " + std::to_string(k + 1) + " points, got " +
                               std::to_string(points.size()));
    }
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw InsufficientData("knn_graph: points have inconsistent dimensions");
        }
    }
    const std::size_t n = points.size();
    NeighborGraph g;
    g.k = k;
    g.rows.resize(n);
    std::vector<Neighbor> cand(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                cand[c++] = {j, euclidean(points[i], points[j])};
            }
        }
        auto less = [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
        };
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(), less);
        g.rows[i].assign(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return g;
}

inline NeighborGraph knn_graph(std::span<const Embedding> embeddings, std::size_t k) {
    std::vector<std::vector<double>> points;
    points.reserve(embeddings.size());
    for (const auto& e : embeddings) {
        if (e.vec.size() != kEmbeddingDim) {
            throw InsufficientData("embedding has dimension " + std::to_string(e.vec.size()) + ", expected " +
                                   std::to_string(kEmbeddingDim));
        }
        points.push_back(e.vec);
    }
    return knn_graph(std::span<const std::vector<double>>(points), k);
}

} // namespace pitchtrack

#endif
