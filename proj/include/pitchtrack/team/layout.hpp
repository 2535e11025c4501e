#ifndef PITCHTRACK_TEAM_LAYOUT_HPP
#define PITCHTRACK_TEAM_LAYOUT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "../core/error.hpp"
#include "../core/random.hpp"
#include "fuzzy.hpp"

namespace pitchtrack {

using Point3 = std::array<double, 3>;

struct UmapConfig {
    std::size_t n_neighbors = 15;
    static constexpr std::size_t n_components = 3;
    double min_dist = 0.1;
    double spread = 1.0;
    int epochs = 200;
    int negative_sample_rate = 5;
    double learning_rate = 1.0;
    std::uint64_t seed = 42;

    void validate() const {
        if (n_neighbors < 2) {
            throw ConfigError("umap: n_neighbors must be >= 2");
        }
        if (epochs < 1) {
            throw ConfigError("umap: epochs must be >= 1");
        }
        if (!(min_dist >= 0) || !(spread > 0) || min_dist > spread) {
            throw ConfigError("umap: need 0 <= min_dist <= spread");
        }
        if (negative_sample_rate < 0 || !(learning_rate > 0)) {
            throw ConfigError("umap: invalid negative_sample_rate or learning_rate");
        }
    }
};

struct CurveParams {
    double a;
    double b;
};

/**
 * Least-squares fit of 1 / (1 + a d^(2b)) to the target membership curve
 * (1 below min_dist, exp(-(d - min_dist) / spread) above), sampled at 300
 * points on [0, 3 * spread]. Solved with Levenberg-Marquardt.
 */
inline CurveParams fit_curve_params(double min_dist, double spread = 1.0) {
    constexpr int samples = 300;
    std::vector<double> xs(samples), ys(samples);
    for (int i = 0; i < samples; ++i) {
        xs[i] = 3 * spread * i / (samples - 1);
        ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
    }

    auto residual_sum = [&](double a, double b) {
        double s = 0;
        for (int i = 0; i < samples; ++i) {
            const double r = 1 / (1 + a * std::pow(xs[i], 2 * b)) - ys[i];
            s += r * r;
        }
        return s;
    };

    double a = 1, b = 1, lambda = 1e-3;
    double cost = residual_sum(a, b);
    for (int iter = 0; iter < 500; ++iter) {
        // Normal equations J^T J and J^T r for the two parameters.
        double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
        for (int i = 0; i < samples; ++i) {
            const double x = xs[i];
            const double p = x > 0 ? std::pow(x, 2 * b) : 0.0;
            const double denom = 1 + a * p;
            const double f = 1 / denom;
            const double r = f - ys[i];
            const double da = -p / (denom * denom);
            const double db = x > 0 ? -a * p * 2 * std::log(x) / (denom * denom) : 0.0;
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += da * r;
            gb += db * r;
        }
        bool improved = false;
        while (lambda < 1e12) {
            const double m00 = jaa * (1 + lambda), m11 = jbb * (1 + lambda), m01 = jab;
            const double det = m00 * m11 - m01 * m01;
            const double step_a = -(m11 * ga - m01 * gb) / det;
            const double step_b = -(m00 * gb - m01 * ga) / det;
            const double na = a + step_a, nb = b + step_b;
            const double ncost = residual_sum(na, nb);
            if (std::isfinite(ncost) && ncost < cost) {
                const bool converged = cost - ncost < 1e-15 * std::max(1.0, cost) &&
                                       std::abs(step_a) < 1e-12 && std::abs(step_b) < 1e-12;
                a = na;
                b = nb;
                cost = ncost;
                lambda = std::max(lambda / 10, 1e-12);
                improved = true;
                if (converged) {
                    return {a, b};
                }
                break;
            }
            lambda *= 10;
        }
        if (!improved) {
            break;
        }
    }
    return {a, b};
}

namespace detail {

inline double clip_gradient(double g) { return std::clamp(g, -4.0, 4.0); }

inline double squared_distance(const Point3& a, const Point3& b) {
    double s = 0;
    for (std::size_t d = 0; d < 3; ++d) {
        s += (a[d] - b[d]) * (a[d] - b[d]);
    }
    return s;
}

} // namespace detail

/**
 * Stochastic-gradient layout of a fuzzy graph in three dimensions.
 *
 * Positions start uniformly in [-10, 10]^3. Each epoch samples every edge
 * in proportion to its weight for an attractive step and draws
 * `negative_sample_rate` uniform negatives per sampled edge for repulsive
 * steps. The learning rate decays linearly to zero.
 */
inline std::vector<Point3> optimize_layout(const FuzzyGraph& graph, const UmapConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = graph.n_points;
    std::vector<Point3> pos(n);
    for (auto& p : pos) {
        for (auto& c : p) {
            c = rng.uniform(-10, 10);
        }
    }
    if (graph.edges.empty() || n < 2) {
        return pos;
    }

    const auto [a, b] = fit_curve_params(cfg.min_dist, cfg.spread);
    const double epochs = cfg.epochs;

    struct DirectedEdge {
        std::size_t head;
        std::size_t tail;
        double epochs_per_sample;
        double next_sample;
        double epochs_per_negative;
        double next_negative;
    };
    double max_w = 0;
    for (const auto& e : graph.edges) {
        max_w = std::max(max_w, e.weight);
    }
    std::vector<DirectedEdge> edges;
    for (const auto& e : graph.edges) {
        // Edges that would be sampled less than once over the run are dropped.
        if (e.weight * epochs / max_w < 1) {
            continue;
        }
        const double eps = max_w / e.weight;
        const double eps_neg = cfg.negative_sample_rate > 0 ? eps / cfg.negative_sample_rate : 0.0;
        edges.push_back({e.i, e.j, eps, eps, eps_neg, eps_neg});
        edges.push_back({e.j, e.i, eps, eps, eps_neg, eps_neg});
    }

    int bad_epochs = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double alpha = cfg.learning_rate * (1.0 - epoch / epochs);
        for (auto& e : edges) {
            if (e.next_sample > epoch) {
                continue;
            }
            auto& current = pos[e.head];
            auto& other = pos[e.tail];
            const double dist_sq = detail::squared_distance(current, other);
            double coeff = 0;
            if (dist_sq > 0) {
                coeff = -2 * a * b * std::pow(dist_sq, b - 1) / (a * std::pow(dist_sq, b) + 1);
            }
            for (std::size_t d = 0; d < 3; ++d) {
                const double g = detail::clip_gradient(coeff * (current[d] - other[d]));
                current[d] += g * alpha;
                other[d] -= g * alpha;
            }
            e.next_sample += e.epochs_per_sample;

            if (cfg.negative_sample_rate == 0) {
                continue;
            }
            const int n_neg = static_cast<int>((epoch - e.next_negative) / e.epochs_per_negative);
            for (int s = 0; s < n_neg; ++s) {
                const std::size_t k = rng.index(n);
                if (k == e.head) {
                    continue;
                }
                const auto& neg = pos[k];
                const double nd = detail::squared_distance(current, neg);
                double rcoeff = 0;
                if (nd > 0) {
                    rcoeff = 2 * b / ((0.001 + nd) * (a * std::pow(nd, b) + 1));
                }
                for (std::size_t d = 0; d < 3; ++d) {
                    const double g = rcoeff > 0 ? detail::clip_gradient(rcoeff * (current[d] - neg[d])) : 4.0;
                    current[d] += g * alpha;
                }
            }
            e.next_negative += n_neg * e.epochs_per_negative;
        }

        bool bad = false;
        for (auto& p : pos) {
            for (auto& c : p) {
                if (!std::isfinite(c)) {
                    bad = true;
                    c = std::isnan(c) ? 0.0 : std::clamp(c, -10.0, 10.0);
                }
            }
        }
        bad_epochs = bad ? bad_epochs + 1 : 0;
        if (bad_epochs >= 3) {
            throw OptimizationDiverged("layout produced non-finite coordinates for 3 consecutive epochs");
        }
    }
    return pos;
}

} // namespace pitchtrack

#endif
