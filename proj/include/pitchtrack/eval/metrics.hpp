#ifndef PITCHTRACK_EVAL_METRICS_HPP
#define PITCHTRACK_EVAL_METRICS_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "../core/classes.hpp"
#include "../core/detection.hpp"
#include "average_precision.hpp"
#include "matching.hpp"

namespace pitchtrack {

/// IoU thresholds 0.50, 0.55, ..., 0.95.
inline std::vector<double> coco_iou_thresholds() {
    std::vector<double> t;
    for (int i = 0; i < 10; ++i) {
        t.push_back(static_cast<double>(50 + 5 * i) / 100.0);
    }
    return t;
}

namespace detail {

struct FrameClassGroup {
    std::vector<Detection> preds;
    std::vector<GroundTruthObject> gts;
};

using GroupKey = std::pair<FrameIndex, int>;

inline std::map<GroupKey, FrameClassGroup> group_by_frame_class(std::span<const Detection> preds,
                                                                std::span<const GroundTruthObject> gts) {
    std::map<GroupKey, FrameClassGroup> groups;
    for (const auto& p : preds) {
        groups[{p.frame, static_cast<int>(p.cls)}].preds.push_back(p);
    }
    for (const auto& g : gts) {
        groups[{g.frame, static_cast<int>(g.cls)}].gts.push_back(g);
    }
    return groups;
}

} // namespace detail

/// TP/FP flags of one class pooled across frames, sorted by descending score.
struct ClassCurve {
    std::vector<bool> tp;
    std::size_t total_gt = 0;
};

inline ClassCurve class_curve(std::span<const Detection> preds, std::span<const GroundTruthObject> gts,
                              ClassLabel cls, double iou_threshold) {
    struct Scored {
        double score;
        bool tp;
    };
    std::vector<Scored> pooled;
    ClassCurve curve;
    for (const auto& [key, group] : detail::group_by_frame_class(preds, gts)) {
        if (key.second != static_cast<int>(cls)) {
            continue;
        }
        const auto m = match_predictions(group.preds, group.gts, iou_threshold);
        for (auto p : m.order) {
            pooled.push_back({group.preds[p].score, m.tp[p]});
        }
        curve.total_gt += group.gts.size();
    }
    std::stable_sort(pooled.begin(), pooled.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
    for (const auto& s : pooled) {
        curve.tp.push_back(s.tp);
    }
    return curve;
}

inline std::optional<double> class_average_precision(std::span<const Detection> preds,
                                                     std::span<const GroundTruthObject> gts, ClassLabel cls,
                                                     double iou_threshold) {
    const auto curve = class_curve(preds, gts, cls, iou_threshold);
    return average_precision(curve.tp, curve.total_gt);
}

struct ThresholdSweep {
    std::vector<double> thresholds;
    /// ap[class][threshold]
    std::array<std::vector<std::optional<double>>, kNumClasses> ap;
    /// Per-class arithmetic mean over the thresholds.
    std::array<std::optional<double>, kNumClasses> mean;
};

inline ThresholdSweep map_over_thresholds(std::span<const Detection> preds, std::span<const GroundTruthObject> gts,
                                          std::vector<double> thresholds = coco_iou_thresholds()) {
    ThresholdSweep sweep;
    sweep.thresholds = std::move(thresholds);
    for (auto cls : kAllClasses) {
        auto& aps = sweep.ap[class_index(cls)];
        double sum = 0;
        bool defined = true;
        for (double t : sweep.thresholds) {
            const auto ap = class_average_precision(preds, gts, cls, t);
            aps.push_back(ap);
            if (ap) {
                sum += *ap;
            } else {
                defined = false;
            }
        }
        if (defined && !sweep.thresholds.empty()) {
            sweep.mean[class_index(cls)] = sum / static_cast<double>(sweep.thresholds.size());
        }
    }
    return sweep;
}

struct PrecisionRecall {
    double precision = 1;
    double recall = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
};

/**
 * Precision and recall at one operating point, pooled over every frame and
 * class present. Matching never crosses classes. Empty denominators give
 * precision 1 and recall 0.
 */
inline PrecisionRecall precision_recall_point(std::span<const Detection> preds,
                                              std::span<const GroundTruthObject> gts, double iou_threshold,
                                              double score_threshold) {
    std::vector<Detection> kept;
    for (const auto& p : preds) {
        if (p.score >= score_threshold) {
            kept.push_back(p);
        }
    }
    PrecisionRecall pr;
    for (const auto& [key, group] : detail::group_by_frame_class(kept, gts)) {
        const auto m = match_predictions(group.preds, group.gts, iou_threshold);
        pr.tp += m.true_positives();
        pr.fp += m.false_positives();
        pr.fn += m.false_negatives;
    }
    if (pr.tp + pr.fp > 0) {
        pr.precision = static_cast<double>(pr.tp) / static_cast<double>(pr.tp + pr.fp);
    }
    if (pr.tp + pr.fn > 0) {
        pr.recall = static_cast<double>(pr.tp) / static_cast<double>(pr.tp + pr.fn);
    }
    return pr;
}

} // namespace pitchtrack

#endif
