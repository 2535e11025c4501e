#ifndef PITCHTRACK_SIM_SIMULATOR_HPP
#define PITCHTRACK_SIM_SIMULATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "../core/detection.hpp"
#include "../core/geometry.hpp"
#include "../core/jsonl.hpp"
#include "../core/random.hpp"
#include "../ingest/detection_io.hpp"
#include "../ingest/frame_plan.hpp"
#include "config.hpp"

namespace pitchtrack {

struct SimOutput {
    std::vector<GroundTruthObject> ground_truth;
    DetectionStream detections;
    /// Source object id of each detection; 0 for false positives.
    std::vector<int> detection_source;
    std::vector<Embedding> embeddings;
    std::vector<RosterEntry> roster;
};

namespace detail {

struct Vec2 {
    double x;
    double y;
};

struct ObjectPath {
    double box_w;
    double box_h;
    double speed;
    std::vector<Vec2> waypoints;
};

inline ObjectPath make_path(const SimConfig& cfg, const RosterEntry& who, Rng& rng) {
    ObjectPath p;
    if (who.cls == ClassLabel::ball) {
        p.box_w = p.box_h = 16;
    } else {
        p.box_h = rng.uniform(70, 90);
        p.box_w = 0.42 * p.box_h;
    }
    p.speed = rng.uniform(cfg.player_speed_min, cfg.player_speed_max);
    if (who.cls == ClassLabel::ball) {
        p.speed *= cfg.ball_speed_multiplier;
    }
    double x_lo = p.box_w / 2, x_hi = cfg.width - p.box_w / 2;
    const double y_lo = p.box_h / 2, y_hi = cfg.height - p.box_h / 2;
    if (who.cls == ClassLabel::goalkeeper) {
        // Keepers patrol their own end of the pitch.
        const double band = 0.15 * cfg.width;
        if (who.team.value_or(0) == 0) {
            x_hi = std::max(x_lo + 1, band);
        } else {
            x_lo = std::min(x_hi - 1, cfg.width - band);
        }
    }
    for (int i = 0; i <= cfg.waypoints_per_object; ++i) {
        p.waypoints.push_back({rng.uniform(x_lo, x_hi), rng.uniform(y_lo, y_hi)});
    }
    return p;
}

/// Box centres for every frame, moving at constant speed between waypoints.
inline std::vector<Vec2> trace_path(const ObjectPath& p, int frames) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(frames));
    Vec2 pos = p.waypoints.front();
    std::size_t target = 1;
    for (int f = 0; f < frames; ++f) {
        out.push_back(pos);
        double budget = p.speed;
        while (budget > 0) {
            const Vec2 goal = p.waypoints[target];
            const double dx = goal.x - pos.x, dy = goal.y - pos.y;
            const double dist = std::hypot(dx, dy);
            if (dist > budget) {
                pos.x += dx / dist * budget;
                pos.y += dy / dist * budget;
                budget = 0;
            } else {
                pos = goal;
                budget -= dist;
                // Loop back through the waypoints.
                target = (target + 1) % p.waypoints.size();
                if (dist == 0 && budget == p.speed) {
                    break;
                }
            }
        }
    }
    return out;
}

inline bool absent(const SimConfig& cfg, int object_id, FrameIndex f) {
    for (const auto& s : cfg.script) {
        if (s.object_id == object_id && f >= s.exit_frame && f < s.reentry_frame) {
            return true;
        }
    }
    return false;
}

inline double base_score(ClassLabel c) { return c == ClassLabel::ball ? 0.85 : 0.92; }

} // namespace detail

/**
 * Generates ground truth and a corrupted detection stream for one scene.
 *
 * Random draws are made for every object on every frame whatever the
 * corruption settings, so two configs that differ only in corruption
 * parameters see the same underlying randomness.
 */
inline SimOutput simulate(const SimConfig& cfg) {
    cfg.validate();
    Rng motion_rng(cfg.seed);
    Rng noise_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    const std::size_t n = cfg.roster.size();
    std::vector<std::vector<detail::Vec2>> centres(n);
    std::vector<detail::ObjectPath> paths;
    for (std::size_t i = 0; i < n; ++i) {
        paths.push_back(detail::make_path(cfg, cfg.roster[i], motion_rng));
        centres[i] = detail::trace_path(paths.back(), cfg.frames);
    }

    SimOutput out;
    out.roster = cfg.roster;
    for (FrameIndex f = 0; f < cfg.frames; ++f) {
        std::vector<GroundTruthObject> visible;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = paths[i];
            const double jx = motion_rng.normal(0, 1) * cfg.jitter_sigma;
            const double jy = motion_rng.normal(0, 1) * cfg.jitter_sigma;
            const double cx = std::clamp(centres[i][static_cast<std::size_t>(f)].x + jx, p.box_w / 2,
                                         cfg.width - p.box_w / 2);
            const double cy = std::clamp(centres[i][static_cast<std::size_t>(f)].y + jy, p.box_h / 2,
                                         cfg.height - p.box_h / 2);
            const int id = static_cast<int>(i) + 1;
            if (detail::absent(cfg, id, f)) {
                continue;
            }
            GroundTruthObject g;
            g.frame = f;
            g.object_id = id;
            g.cls = cfg.roster[i].cls;
            g.box = {cx - p.box_w / 2, cy - p.box_h / 2, cx + p.box_w / 2, cy + p.box_h / 2};
            visible.push_back(g);
        }

        for (const auto& g : visible) {
            out.ground_truth.push_back(g);
            double worst_overlap = 0;
            bool occluded = false;
            for (const auto& other : visible) {
                if (other.object_id == g.object_id) {
                    continue;
                }
                const double o = iou(g.box, other.box);
                worst_overlap = std::max(worst_overlap, o);
                if (o > cfg.occlusion_iou_threshold && other.box.area() > g.box.area()) {
                    occluded = true;
                }
            }
            const bool dropped = noise_rng.uniform() < cfg.dropout;
            std::array<double, 4> noise{};
            for (auto& v : noise) {
                v = noise_rng.normal() * cfg.box_noise_sigma;
            }
            const double score_draw = noise_rng.normal();
            if (dropped || occluded) {
                continue;
            }
            Detection d;
            d.frame = f;
            d.cls = g.cls;
            d.box = g.box;
            if (cfg.box_noise_sigma > 0) {
                BoundingBox b{g.box.x1 + noise[0], g.box.y1 + noise[1], g.box.x2 + noise[2], g.box.y2 + noise[3]};
                b.x1 = std::clamp(b.x1, 0.0, cfg.width - 1);
                b.y1 = std::clamp(b.y1, 0.0, cfg.height - 1);
                b.x2 = std::clamp(b.x2, b.x1 + 1, cfg.width);
                b.y2 = std::clamp(b.y2, b.y1 + 1, cfg.height);
                d.box = b;
            }
            const double mean = detail::base_score(g.cls) - 0.3 * worst_overlap;
            d.score = std::clamp(mean + cfg.score_sigma * score_draw, 0.01, 1.0);
            out.detections.detections.push_back(d);
            out.detection_source.push_back(g.object_id);
        }

        const int fps = noise_rng.poisson(cfg.false_positive_rate);
        for (int k = 0; k < fps; ++k) {
            Detection d;
            d.frame = f;
            const bool ball = noise_rng.bernoulli(0.5);
            d.cls = ball ? ClassLabel::ball : ClassLabel::player;
            const double h = ball ? 16.0 : noise_rng.uniform(60, 90);
            const double w = ball ? 16.0 : 0.42 * h;
            const double x = noise_rng.uniform(0, cfg.width - w);
            const double y = noise_rng.uniform(0, cfg.height - h);
            d.box = {x, y, x + w, y + h};
            d.score = noise_rng.uniform(0.1, 0.7);
            out.detections.detections.push_back(d);
            out.detection_source.push_back(0);
        }
    }
    return out;
}

/**
 * Appearance embeddings for every detection on frames sampled at the
 * embedding stride.
 *
 * Each identity group (team 0 players, team 1 players, each keeper, the
 * referee, the ball) owns one prototype; prototypes are mutually orthogonal
 * with norm `prototype_norm`. Per-embedding noise is isotropic Gaussian with
 * expected norm about `embedding_noise_sigma`. False positives get pure
 * noise around the origin.
 */
inline std::vector<Embedding> synth_embeddings(const SimConfig& cfg, const SimOutput& sim) {
    Rng rng(cfg.seed ^ 0xd1b54a32d192ed03ULL);
    constexpr std::size_t groups = 6;
    std::vector<std::vector<double>> protos;
    while (protos.size() < groups) {
        std::vector<double> v(kEmbeddingDim);
        for (auto& c : v) {
            c = rng.normal();
        }
        for (const auto& p : protos) {
            double dot = 0;
            for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
                dot += v[i] * p[i];
            }
            for (std::size_t i = 0; i < kEmbeddingDim; ++i) {
                v[i] -= dot * p[i];
            }
        }
        double norm = 0;
        for (double c : v) {
            norm += c * c;
        }
        norm = std::sqrt(norm);
        for (auto& c : v) {
            c /= norm;
        }
        protos.push_back(std::move(v));
    }

    auto group_of = [&](int object_id) -> std::size_t {
        const auto& r = cfg.roster[static_cast<std::size_t>(object_id - 1)];
        switch (r.cls) {
        case ClassLabel::player: return r.team.value_or(0) == 0 ? 0 : 1;
        case ClassLabel::goalkeeper: return r.team.value_or(0) == 0 ? 2 : 3;
        case ClassLabel::referee: return 4;
        case ClassLabel::ball: return 5;
        }
        return 5;
    };

    const double component_sd = cfg.embedding_noise_sigma / std::sqrt(static_cast<double>(kEmbeddingDim));
    const auto plan = FramePlan::make(cfg.frames, cfg.embedding_stride);
    std::vector<Embedding> out;
    const auto& dets = sim.detections.detections;
    std::size_t i = 0;
    while (i < dets.size()) {
        const FrameIndex frame = dets[i].frame;
        std::size_t local = 0;
        for (; i < dets.size() && dets[i].frame == frame; ++i, ++local) {
            if (!plan.contains(frame)) {
                continue;
            }
            Embedding e;
            e.frame = frame;
            e.det_index = local;
            e.vec.assign(kEmbeddingDim, 0.0);
            const int src = sim.detection_source[i];
            if (src > 0) {
                const auto& proto = protos[group_of(src)];
                for (std::size_t k = 0; k < kEmbeddingDim; ++k) {
                    e.vec[k] = cfg.prototype_norm * proto[k];
                }
            }
            for (auto& c : e.vec) {
                c += rng.normal() * component_sd;
            }
            out.push_back(std::move(e));
        }
    }
    return out;
}

inline SimOutput simulate_with_embeddings(const SimConfig& cfg) {
    auto out = simulate(cfg);
    out.embeddings = synth_embeddings(cfg, out);
    return out;
}

inline void write_roster(std::ostream& out, const std::vector<RosterEntry>& roster, const ClassMap& classes = {}) {
    for (std::size_t i = 0; i < roster.size(); ++i) {
        jsonl::OrderedJson obj;
        obj["object_id"] = static_cast<int>(i) + 1;
        obj["class_id"] = classes.id_of(roster[i].cls);
        obj["team"] = roster[i].team ? jsonl::OrderedJson(*roster[i].team) : jsonl::OrderedJson(nullptr);
        out << obj.dump() << '\n';
    }
}

} // namespace pitchtrack

#endif
