#ifndef PITCHTRACK_TRACKER_BYTE_TRACKER_HPP
#define PITCHTRACK_TRACKER_BYTE_TRACKER_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "../core/error.hpp"
#include "../core/geometry.hpp"
#include "../ingest/detection_io.hpp"
#include "assignment.hpp"
#include "kalman.hpp"

namespace pitchtrack {

enum class TrackStatus { tentative, active, lost, removed };

inline const char* status_name(TrackStatus s) {
    switch (s) {
    case TrackStatus::tentative: return "tentative";
    case TrackStatus::active: return "active";
    case TrackStatus::lost: return "lost";
    case TrackStatus::removed: return "removed";
    }
    return "unknown";
}

struct HistoryEntry {
    FrameIndex frame = 0;
    BoundingBox box;
    double score = 0;
    /// Position of the source detection within its frame.
    std::size_t det_index = 0;
};

struct TrackRecord {
    int id = 0;
    ClassLabel cls = ClassLabel::player;
    KalmanState state;
    TrackStatus status = TrackStatus::tentative;
    FrameIndex last_update = 0;
    /// True once the track has been active at least once.
    bool confirmed = false;
    std::vector<HistoryEntry> history;
    std::optional<int> team;
};

/// Detection gate applied per class before association.
struct ClassGate {
    double min_box_area = 10;
    /// Detections wider than this (w/h) are ignored; nullopt disables the check.
    std::optional<double> max_aspect_ratio = 1.6;
};

struct TrackerConfig {
    double high_score_threshold = 0.6;
    double low_score_floor = 0.1;
    double new_track_threshold = 0.7;
    double stage1_min_iou = 0.2;
    double stage2_min_iou = 0.5;
    FrameIndex max_lost_age = 30;
    std::array<ClassGate, kNumClasses> gates = default_gates();
    KalmanNoise noise;

    static std::array<ClassGate, kNumClasses> default_gates() {
        std::array<ClassGate, kNumClasses> g{};
        g[class_index(ClassLabel::ball)] = ClassGate{1.0, std::nullopt};
        return g;
    }

    const ClassGate& gate(ClassLabel c) const { return gates[class_index(c)]; }

    void validate() const {
        if (!(low_score_floor >= 0 && low_score_floor < high_score_threshold && high_score_threshold <= 1)) {
            throw ConfigError("tracker: need 0 <= low_score_floor < high_score_threshold <= 1");
        }
        if (!(new_track_threshold >= 0 && new_track_threshold <= 1)) {
            throw ConfigError("tracker: new_track_threshold must lie in [0, 1]");
        }
        if (!(stage1_min_iou >= 0 && stage1_min_iou <= 1 && stage2_min_iou >= 0 && stage2_min_iou <= 1)) {
            throw ConfigError("tracker: IoU gates must lie in [0, 1]");
        }
        if (max_lost_age < 1) {
            throw ConfigError("tracker: max_lost_age must be >= 1");
        }
        for (const auto& g : gates) {
            if (g.min_box_area < 0 || (g.max_aspect_ratio && !(*g.max_aspect_ratio > 0))) {
                throw ConfigError("tracker: class gates must be non-negative");
            }
        }
    }
};

/// Which track took which detection on one frame.
struct FrameAssignment {
    int track_id;
    std::size_t det_index;
};

struct StepResult {
    FrameIndex frame = 0;
    std::vector<FrameAssignment> assignments;
    /// Tracks that are active after this step.
    std::vector<int> active_ids;
};

/**
 * BYTE association over a single sequence.
 *
 * Each step predicts all live tracks, matches high-score detections against
 * active and lost tracks, then low-score detections against the remaining
 * previously-active tracks, confirms tentative tracks that match again and
 * starts new tentative tracks from leftover confident detections. Matching
 * never crosses classes.
 */
class ByteTracker {
public:
    explicit ByteTracker(TrackerConfig cfg = {}) : cfg_(std::move(cfg)), filter_(cfg_.noise) { cfg_.validate(); }

    const TrackerConfig& config() const { return cfg_; }
    const std::vector<TrackRecord>& tracks() const { return tracks_; }
    std::optional<FrameIndex> last_frame() const { return last_frame_; }

    StepResult step(FrameIndex frame, std::span<const Detection> detections) {
        for (const auto& d : detections) {
            if (d.frame != frame) {
                throw SequencingError("detections from frame " + std::to_string(d.frame) +
                                      " passed to the step for frame " + std::to_string(frame));
            }
        }
        if (last_frame_ && frame <= *last_frame_) {
            throw SequencingError("frame " + std::to_string(frame) + " follows frame " +
                                  std::to_string(*last_frame_));
        }
        const FrameIndex elapsed = last_frame_ ? frame - *last_frame_ : 1;
        last_frame_ = frame;

        for (auto& t : tracks_) {
            if (t.status == TrackStatus::removed) {
                continue;
            }
            for (FrameIndex k = 0; k < elapsed; ++k) {
                t.state = filter_.predict(t.state);
            }
        }

        std::vector<std::size_t> high, low;
        for (std::size_t i = 0; i < detections.size(); ++i) {
            const auto& d = detections[i];
            if (!passes_gate(d)) {
                continue;
            }
            if (d.score >= cfg_.high_score_threshold) {
                high.push_back(i);
            } else if (d.score >= cfg_.low_score_floor) {
                low.push_back(i);
            }
        }

        std::vector<std::size_t> was_active, pool1, tentative;
        for (std::size_t t = 0; t < tracks_.size(); ++t) {
            switch (tracks_[t].status) {
            case TrackStatus::active:
                was_active.push_back(t);
                pool1.push_back(t);
                break;
            case TrackStatus::lost: pool1.push_back(t); break;
            case TrackStatus::tentative: tentative.push_back(t); break;
            case TrackStatus::removed: break;
            }
        }

        StepResult result;
        result.frame = frame;
        std::vector<bool> track_matched(tracks_.size(), false);

        auto apply = [&](const std::vector<Match>& matches) {
            for (const auto& m : matches) {
                auto& t = tracks_[m.row];
                const auto& d = detections[m.col];
                t.state = filter_.update(t.state, to_center_form(d.box));
                t.status = TrackStatus::active;
                t.confirmed = true;
                t.last_update = frame;
                t.history.push_back({frame, d.box, d.score, m.col});
                track_matched[m.row] = true;
                result.assignments.push_back({t.id, m.col});
            }
        };

        // Stage 1: confident detections against active and lost tracks.
        auto stage1 = associate(pool1, high, detections, cfg_.stage1_min_iou);
        apply(stage1.matches);

        // Stage 2: weak detections against previously-active tracks still unmatched.
        std::vector<std::size_t> pool2;
        for (auto t : was_active) {
            if (!track_matched[t]) {
                pool2.push_back(t);
            }
        }
        auto stage2 = associate(pool2, low, detections, cfg_.stage2_min_iou);
        apply(stage2.matches);

        // Tentative tracks need a second consecutive confident match.
        auto stage3 = associate(tentative, stage1.unmatched_detections, detections, cfg_.stage1_min_iou);
        apply(stage3.matches);

        for (auto t : tentative) {
            if (!track_matched[t]) {
                tracks_[t].status = TrackStatus::removed;
            }
        }
        for (auto t : pool1) {
            if (!track_matched[t] && tracks_[t].status == TrackStatus::active) {
                tracks_[t].status = TrackStatus::lost;
            }
        }

        for (auto di : stage3.unmatched_detections) {
            const auto& d = detections[di];
            if (d.score < cfg_.new_track_threshold) {
                continue;
            }
            TrackRecord t;
            t.id = next_id_++;
            t.cls = d.cls;
            t.state = filter_.initiate(to_center_form(d.box));
            t.status = TrackStatus::tentative;
            t.last_update = frame;
            t.history.push_back({frame, d.box, d.score, di});
            result.assignments.push_back({t.id, di});
            tracks_.push_back(std::move(t));
        }

        for (auto& t : tracks_) {
            if (t.status == TrackStatus::lost && frame - t.last_update > cfg_.max_lost_age) {
                t.status = TrackStatus::removed;
            }
            if (t.status == TrackStatus::active) {
                result.active_ids.push_back(t.id);
            }
        }
        return result;
    }

private:
    struct Association {
        std::vector<Match> matches;
        std::vector<std::size_t> unmatched_detections;
    };

    bool passes_gate(const Detection& d) const {
        const auto& g = cfg_.gate(d.cls);
        if (d.box.area() < g.min_box_area) {
            return false;
        }
        return !g.max_aspect_ratio || d.box.width() / d.box.height() <= *g.max_aspect_ratio;
    }

    // Returns matches as (track index, detection index).
    Association associate(const std::vector<std::size_t>& track_idx, const std::vector<std::size_t>& det_idx,
                          std::span<const Detection> detections, double min_iou) const {
        Association out;
        std::vector<bool> det_used(det_idx.size(), false);
        if (!track_idx.empty() && !det_idx.empty()) {
            CostMatrix cost(track_idx.size(), det_idx.size(), kForbiddenCost);
            for (std::size_t r = 0; r < track_idx.size(); ++r) {
                const auto& t = tracks_[track_idx[r]];
                const auto predicted = t.state.box();
                for (std::size_t c = 0; c < det_idx.size(); ++c) {
                    const auto& d = detections[det_idx[c]];
                    if (d.cls != t.cls) {
                        continue;
                    }
                    const double overlap = iou(predicted, d.box);
                    if (overlap >= min_iou && overlap > 0) {
                        cost(r, c) = 1.0 - overlap;
                    }
                }
            }
            for (const auto& m : solve_assignment(cost)) {
                if (cost(m.row, m.col) >= kForbiddenCost) {
                    continue;
                }
                out.matches.push_back({track_idx[m.row], det_idx[m.col]});
                det_used[m.col] = true;
            }
        }
        for (std::size_t c = 0; c < det_idx.size(); ++c) {
            if (!det_used[c]) {
                out.unmatched_detections.push_back(det_idx[c]);
            }
        }
        return out;
    }

    TrackerConfig cfg_;
    KalmanFilter filter_;
    std::vector<TrackRecord> tracks_;
    int next_id_ = 1;
    std::optional<FrameIndex> last_frame_;
};

/// Single functional step: copies the tracker, advances it, returns both.
inline std::pair<ByteTracker, StepResult> byte_step(ByteTracker tracker, FrameIndex frame,
                                                    std::span<const Detection> detections) {
    auto r = tracker.step(frame, detections);
    return {std::move(tracker), std::move(r)};
}

/**
 * Runs the tracker over a whole stream.
 *
 * Every frame 0, stride, 2*stride, ... up to the last detection frame is
 * stepped; frames with no detections are empty steps and detections on
 * other frames are skipped. Returns every track ever created.
 */
inline std::vector<TrackRecord> run_sequence(const DetectionStream& stream, const TrackerConfig& cfg = {},
                                             FrameIndex stride = 1) {
    if (stride < 1) {
        throw ConfigError("tracking stride must be >= 1");
    }
    ByteTracker tracker(cfg);
    if (stream.empty()) {
        return {};
    }
    const auto groups = stream.frames();
    std::size_t g = 0;
    const FrameIndex last = groups.back().frame;
    for (FrameIndex f = 0; f <= last; f += stride) {
        while (g < groups.size() && groups[g].frame < f) {
            ++g;
        }
        std::span<const Detection> dets;
        if (g < groups.size() && groups[g].frame == f) {
            dets = groups[g].detections;
        }
        try {
            tracker.step(f, dets);
        } catch (const NumericError& e) {
            throw NumericError("frame " + std::to_string(f) + ": " + e.what());
        }
    }
    return tracker.tracks();
}

} // namespace pitchtrack

#endif
