#ifndef PITCHTRACK_TEAM_KMEANS_HPP
#define PITCHTRACK_TEAM_KMEANS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "../core/error.hpp"
#include "../core/random.hpp"

namespace pitchtrack {

struct KMeansResult {
    std::vector<int> labels;
    std::vector<std::vector<double>> centroids;
    /// Inertia after each assignment step.
    std::vector<double> inertia_trace;
    int iterations = 0;

    double inertia() const { return inertia_trace.empty() ? 0.0 : inertia_trace.back(); }
};

namespace detail {

template <typename Point>
double squared_distance(const Point& p, const std::vector<double>& c) {
    double s = 0;
    for (std::size_t d = 0; d < c.size(); ++d) {
        const double diff = static_cast<double>(p[d]) - c[d];
        s += diff * diff;
    }
    return s;
}

template <typename Point>
std::vector<double> to_vector(const Point& p) {
    return std::vector<double>(std::begin(p), std::end(p));
}

} // namespace detail

/**
 * Lloyd's k-means with k-means++ seeding.
 *
 * Iterates until every centroid moves less than 1e-6 or 100 iterations
 * have run. An empty cluster takes the point of the largest cluster that is
 * farthest from its centroid. `Point` is any indexable fixed-size container.
 */
template <typename Point>
KMeansResult kmeans(std::span<const Point> points, std::size_t k = 2, std::uint64_t seed = 42) {
    if (k == 0) {
        throw ConfigError("kmeans: k must be >= 1");
    }
    if (points.size() < k) {
        throw InsufficientData("kmeans needs at least " + std::to_string(k) + " points, got " +
                               std::to_string(points.size()));
    }
    const std::size_t n = points.size();
    Rng rng(seed);

    KMeansResult r;
    r.centroids.push_back(detail::to_vector(points[rng.index(n)]));
    std::vector<double> nearest(n);
    while (r.centroids.size() < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = detail::squared_distance(points[i], r.centroids.front());
            for (std::size_t c = 1; c < r.centroids.size(); ++c) {
                best = std::min(best, detail::squared_distance(points[i], r.centroids[c]));
            }
            nearest[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total <= 0) {
            pick = rng.index(n);
        } else {
            double u = rng.uniform() * total;
            for (pick = 0; pick + 1 < n; ++pick) {
                u -= nearest[pick];
                if (u < 0) {
                    break;
                }
            }
        }
        r.centroids.push_back(detail::to_vector(points[pick]));
    }

    r.labels.assign(n, 0);
    const std::size_t dim = r.centroids.front().size();
    for (int iter = 0; iter < 100; ++iter) {
        double inertia = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = detail::squared_distance(points[i], r.centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = detail::squared_distance(points[i], r.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            r.labels[i] = best;
            inertia += best_d;
        }

        std::vector<std::size_t> counts(k, 0);
        for (int l : r.labels) {
            ++counts[static_cast<std::size_t>(l)];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            const auto largest = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            std::size_t far = n;
            double far_d = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (r.labels[i] != largest) {
                    continue;
                }
                const double d = detail::squared_distance(points[i], r.centroids[static_cast<std::size_t>(largest)]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            inertia -= far_d;
            r.centroids[c] = detail::to_vector(points[far]);
            r.labels[far] = static_cast<int>(c);
            --counts[static_cast<std::size_t>(largest)];
            ++counts[c];
        }
        r.inertia_trace.push_back(inertia);
        r.iterations = iter + 1;

        std::vector<std::vector<double>> next(k, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& acc = next[static_cast<std::size_t>(r.labels[i])];
            for (std::size_t d = 0; d < dim; ++d) {
                acc[d] += static_cast<double>(points[i][d]);
            }
        }
        double shift = 0;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t d = 0; d < dim; ++d) {
                next[c][d] /= static_cast<double>(counts[c]);
            }
            shift = std::max(shift, std::sqrt(detail::squared_distance(next[c], r.centroids[c])));
        }
        r.centroids = std::move(next);
        if (shift < 1e-6) {
            break;
        }
    }
    return r;
}

} // namespace pitchtrack

#endif
