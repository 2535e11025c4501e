#ifndef PITCHTRACK_EVAL_IDENTITY_HPP
#define PITCHTRACK_EVAL_IDENTITY_HPP

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "../core/detection.hpp"
#include "../tracker/assignment.hpp"
#include "../tracker/track_io.hpp"

namespace pitchtrack {

/// Ground-truth object id -> predicted track id, for one frame.
using FrameIdMatch = std::map<int, int>;

namespace detail {

inline std::map<FrameIndex, FrameIdMatch> match_identities(std::span<const GroundTruthObject> gt,
                                                           std::span<const TrackRow> preds, double iou_threshold) {
    std::map<FrameIndex, std::pair<std::vector<const GroundTruthObject*>, std::vector<const TrackRow*>>> frames;
    for (const auto& g : gt) {
        frames[g.frame].first.push_back(&g);
    }
    for (const auto& p : preds) {
        frames[p.frame].second.push_back(&p);
    }
    std::map<FrameIndex, FrameIdMatch> out;
    for (const auto& [frame, sides] : frames) {
        const auto& [gs, ps] = sides;
        auto& matched = out[frame];
        if (gs.empty() || ps.empty()) {
            continue;
        }
        CostMatrix cost(gs.size(), ps.size(), kForbiddenCost);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = 0; j < ps.size(); ++j) {
                const double o = iou(gs[i]->box, ps[j]->box);
                if (o >= iou_threshold && o > 0) {
                    cost(i, j) = 1 - o;
                }
            }
        }
        for (const auto& m : solve_assignment(cost)) {
            if (cost(m.row, m.col) < kForbiddenCost) {
                matched[gs[m.row]->object_id] = ps[m.col]->track_id;
            }
        }
    }
    return out;
}

} // namespace detail

/**
 * Identity switches: per frame, ground truth and predicted boxes are matched
 * by minimum-cost assignment on 1 - IoU (pairs below `iou_threshold` are
 * excluded); a switch is counted whenever an object's matched track id
 * differs from the id it was last matched to.
 */
inline std::size_t count_id_switches(std::span<const GroundTruthObject> gt, std::span<const TrackRow> preds,
                                     double iou_threshold = 0.5) {
    std::map<int, int> last;
    std::size_t switches = 0;
    for (const auto& [frame, matches] : detail::match_identities(gt, preds, iou_threshold)) {
        for (const auto& [object, track] : matches) {
            auto it = last.find(object);
            if (it != last.end() && it->second != track) {
                ++switches;
            }
            last[object] = track;
        }
    }
    return switches;
}

struct IdentityRetention {
    std::size_t objects = 0;
    /// Objects matched to exactly one track id over all frames they appear in.
    std::size_t retained = 0;
    std::map<int, std::set<int>> ids_per_object;

    double fraction() const { return objects == 0 ? 1.0 : static_cast<double>(retained) / static_cast<double>(objects); }
};

inline IdentityRetention identity_retention(std::span<const GroundTruthObject> gt, std::span<const TrackRow> preds,
                                            double iou_threshold = 0.5) {
    IdentityRetention r;
    for (const auto& g : gt) {
        r.ids_per_object[g.object_id];
    }
    for (const auto& [frame, matches] : detail::match_identities(gt, preds, iou_threshold)) {
        for (const auto& [object, track] : matches) {
            r.ids_per_object[object].insert(track);
        }
    }
    r.objects = r.ids_per_object.size();
    for (const auto& [object, ids] : r.ids_per_object) {
        r.retained += ids.size() == 1 ? 1 : 0;
    }
    return r;
}

} // namespace pitchtrack

#endif
