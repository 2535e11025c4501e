#ifndef PITCHTRACK_TEAM_FUZZY_HPP
#define PITCHTRACK_TEAM_FUZZY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "knn.hpp"

namespace pitchtrack {

struct LocalScale {
    double rho;
    double sigma;
};

inline constexpr double kSigmaFloor = 1e-3;

/**
 * Local connectivity (rho) and bandwidth (sigma) for one neighbour row.
 *
 * sigma solves sum_i exp(-max(0, d_i - rho) / sigma) = log2(k) by bisection
 * (tolerance 1e-5, at most 64 steps) and is floored at 1e-3.
 */
inline LocalScale smooth_knn(std::span<const double> distances) {
    const std::size_t k = distances.size();
    const double rho = k > 0 ? distances.front() : 0.0;
    const double target = std::log2(static_cast<double>(k));
    double lo = 0;
    double hi = std::numeric_limits<double>::infinity();
    double sigma = 1;
    for (int iter = 0; iter < 64; ++iter) {
        double sum = 0;
        for (double d : distances) {
            sum += std::exp(-std::max(0.0, d - rho) / sigma);
        }
        if (std::abs(sum - target) < 1e-5) {
            break;
        }
        if (sum > target) {
            hi = sigma;
            sigma = (lo + hi) / 2;
        } else {
            lo = sigma;
            sigma = std::isinf(hi) ? sigma * 2 : (lo + hi) / 2;
        }
    }
    return {rho, std::max(sigma, kSigmaFloor)};
}

struct FuzzyEdge {
    std::size_t i;
    std::size_t j;
    double weight;
};

/// Symmetric membership graph; edges stored once with i < j, sorted.
struct FuzzyGraph {
    std::size_t n_points = 0;
    std::vector<FuzzyEdge> edges;

    double weight(std::size_t a, std::size_t b) const {
        if (a > b) {
            std::swap(a, b);
        }
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b),
                                   [](const FuzzyEdge& e, const std::pair<std::size_t, std::size_t>& key) {
                                       return std::make_pair(e.i, e.j) < key;
                                   });
        if (it != edges.end() && it->i == a && it->j == b) {
            return it->weight;
        }
        return 0;
    }
};

/// Probabilistic t-conorm used to merge the two directional memberships.
inline double fuzzy_union(double a, double b) { return a + b - a * b; }

inline FuzzyGraph fuzzy_simplicial_set(const NeighborGraph& g) {
    // (low, high) -> (membership low->high, membership high->low)
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> directed;
    std::vector<double> dists;
    for (std::size_t i = 0; i < g.size(); ++i) {
        dists.clear();
        for (const auto& nb : g.rows[i]) {
            dists.push_back(nb.distance);
        }
        const auto scale = smooth_knn(dists);
        for (const auto& nb : g.rows[i]) {
            const double w = std::exp(-std::max(0.0, nb.distance - scale.rho) / scale.sigma);
            if (i < nb.index) {
                directed[{i, nb.index}].first = w;
            } else {
                directed[{nb.index, i}].second = w;
            }
        }
    }
    FuzzyGraph out;
    out.n_points = g.size();
    out.edges.reserve(directed.size());
    for (const auto& [key, w] : directed) {
        const double merged = fuzzy_union(w.first, w.second);
        if (merged > 0) {
            out.edges.push_back({key.first, key.second, std::min(merged, 1.0)});
        }
    }
    return out;
}

} // namespace pitchtrack

#endif
