#ifndef PITCHTRACK_TEAM_TEAMS_HPP
#define PITCHTRACK_TEAM_TEAMS_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "../core/detection.hpp"
#include "../core/error.hpp"
#include "../core/jsonl.hpp"
#include "../ingest/detection_io.hpp"
#include "../tracker/byte_tracker.hpp"
#include "../tracker/track_io.hpp"
#include "fuzzy.hpp"
#include "kmeans.hpp"
#include "knn.hpp"
#include "layout.hpp"

namespace pitchtrack {

struct DetectionRef {
    FrameIndex frame = 0;
    std::size_t det_index = 0;

    friend auto operator<=>(const DetectionRef&, const DetectionRef&) = default;
};

/// The detections a track consumed, in frame order.
struct TrackDetections {
    int track_id = 0;
    ClassLabel cls = ClassLabel::player;
    std::vector<DetectionRef> refs;
};

struct TeamAssignment {
    int track_id = 0;
    std::optional<int> team;
    int votes_for = 0;
    int votes_total = 0;

    friend bool operator==(const TeamAssignment&, const TeamAssignment&) = default;
};

inline std::vector<TrackDetections> track_detections(const std::vector<TrackRecord>& tracks) {
    std::vector<TrackDetections> out;
    for (const auto& t : tracks) {
        if (!t.confirmed) {
            continue;
        }
        TrackDetections td{t.id, t.cls, {}};
        for (const auto& h : t.history) {
            td.refs.push_back({h.frame, h.det_index});
        }
        out.push_back(std::move(td));
    }
    return out;
}

/**
 * Recovers detection references for track rows read back from disk.
 *
 * A row refers to the detection of the same frame with the same class and
 * an identical box; rows without such a detection carry no reference.
 */
inline std::vector<TrackDetections> track_detections(const std::vector<TrackRow>& rows,
                                                     const DetectionStream& detections) {
    std::map<FrameIndex, std::span<const Detection>> by_frame;
    for (const auto& g : detections.frames()) {
        by_frame[g.frame] = g.detections;
    }
    std::map<int, TrackDetections> tracks;
    for (const auto& r : rows) {
        auto& td = tracks[r.track_id];
        td.track_id = r.track_id;
        td.cls = r.cls;
        auto it = by_frame.find(r.frame);
        if (it == by_frame.end()) {
            continue;
        }
        for (std::size_t i = 0; i < it->second.size(); ++i) {
            const auto& d = it->second[i];
            if (d.cls == r.cls && d.box == r.box) {
                td.refs.push_back({r.frame, i});
                break;
            }
        }
    }
    std::vector<TrackDetections> out;
    for (auto& [id, td] : tracks) {
        std::sort(td.refs.begin(), td.refs.end());
        out.push_back(std::move(td));
    }
    return out;
}

/**
 * Majority vote of per-detection cluster labels for every player track.
 *
 * Ties go to the label of the track's earliest labelled detection. Tracks
 * of other classes, and player tracks without labelled detections, get no
 * team.
 */
inline std::vector<TeamAssignment> assign_teams(const std::vector<TrackDetections>& tracks,
                                                const std::map<DetectionRef, int>& labels) {
    std::vector<TeamAssignment> out;
    out.reserve(tracks.size());
    for (const auto& t : tracks) {
        TeamAssignment a{t.track_id, std::nullopt, 0, 0};
        if (t.cls == ClassLabel::player) {
            std::map<int, int> votes;
            std::optional<int> earliest;
            for (const auto& ref : t.refs) {
                auto it = labels.find(ref);
                if (it == labels.end()) {
                    continue;
                }
                if (!earliest) {
                    earliest = it->second;
                }
                ++votes[it->second];
                ++a.votes_total;
            }
            if (a.votes_total > 0) {
                int best_label = *earliest;
                int best_votes = votes[*earliest];
                for (const auto& [label, count] : votes) {
                    if (count > best_votes) {
                        best_votes = count;
                        best_label = label;
                    }
                }
                a.team = best_label;
                a.votes_for = best_votes;
            }
        }
        out.push_back(a);
    }
    return out;
}

/// 512-d points to 3-d: k-NN graph, fuzzy simplicial set, SGD layout.
inline std::vector<Point3> umap_embed(std::span<const std::vector<double>> points, const UmapConfig& cfg) {
    cfg.validate();
    const auto graph = knn_graph(points, cfg.n_neighbors);
    return optimize_layout(fuzzy_simplicial_set(graph), cfg);
}

struct PlayerClustering {
    std::vector<DetectionRef> refs;
    std::vector<Point3> layout;
    std::vector<int> labels;
    std::map<DetectionRef, int> label_of;
};

/**
 * Clusters every player-class embedding of the sequence into two groups.
 *
 * One clustering is computed for the whole sequence. Labels are renamed so
 * the first embedding in input order is in group 0.
 */
inline PlayerClustering cluster_players(const std::vector<Embedding>& embeddings, const DetectionStream& detections,
                                        UmapConfig cfg) {
    std::map<FrameIndex, std::span<const Detection>> by_frame;
    for (const auto& g : detections.frames()) {
        by_frame[g.frame] = g.detections;
    }
    PlayerClustering out;
    std::vector<std::vector<double>> points;
    for (const auto& e : embeddings) {
        auto it = by_frame.find(e.frame);
        if (it == by_frame.end() || e.det_index >= it->second.size()) {
            throw LinkError("embedding references detection " + std::to_string(e.det_index) + " of frame " +
                            std::to_string(e.frame) + ", which does not exist");
        }
        if (it->second[e.det_index].cls != ClassLabel::player) {
            continue;
        }
        out.refs.push_back({e.frame, e.det_index});
        points.push_back(e.vec);
    }

    const std::size_t n = points.size();
    if (n == 0) {
        throw InsufficientData("no player embeddings to cluster");
    }
    if (n == 1) {
        out.labels = {0};
    } else if (n == 2) {
        out.labels = kmeans(std::span<const std::vector<double>>(points), 2, cfg.seed).labels;
    } else {
        cfg.n_neighbors = std::min(cfg.n_neighbors, n - 1);
        out.layout = umap_embed(points, cfg);
        out.labels = kmeans(std::span<const Point3>(out.layout), 2, cfg.seed).labels;
    }
    if (out.labels.front() != 0) {
        for (auto& l : out.labels) {
            l = 1 - l;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.label_of[out.refs[i]] = out.labels[i];
    }
    return out;
}

inline void write_team_summary(std::ostream& out, const std::vector<TeamAssignment>& teams) {
    for (const auto& a : teams) {
        jsonl::OrderedJson obj;
        obj["track_id"] = a.track_id;
        obj["team"] = a.team ? jsonl::OrderedJson(*a.team) : jsonl::OrderedJson(nullptr);
        obj["votes_for"] = a.votes_for;
        obj["votes_total"] = a.votes_total;
        out << obj.dump() << '\n';
    }
}

/// Copies team labels onto track rows.
inline std::vector<TrackRow> apply_teams(std::vector<TrackRow> rows, const std::vector<TeamAssignment>& teams) {
    std::map<int, std::optional<int>> by_track;
    for (const auto& a : teams) {
        by_track[a.track_id] = a.team;
    }
    for (auto& r : rows) {
        auto it = by_track.find(r.track_id);
        r.team = it == by_track.end() ? std::nullopt : it->second;
    }
    return rows;
}

} // namespace pitchtrack

#endif
