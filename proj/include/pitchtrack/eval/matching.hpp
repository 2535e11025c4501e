#ifndef PITCHTRACK_EVAL_MATCHING_HPP
#define PITCHTRACK_EVAL_MATCHING_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "../core/detection.hpp"
#include "../core/geometry.hpp"

namespace pitchtrack {

struct MatchOutcome {
    /// Prediction indices in descending score order (ties keep input order).
    std::vector<std::size_t> order;
    /// True-positive flag per prediction, indexed like the input.
    std::vector<bool> tp;
    std::size_t false_negatives = 0;

    std::size_t true_positives() const { return static_cast<std::size_t>(std::count(tp.begin(), tp.end(), true)); }
    std::size_t false_positives() const { return tp.size() - true_positives(); }
};

/**
 * Greedy matching of one frame's predictions of one class.
 *
 * In descending score order each prediction takes the still-unmatched
 * ground truth with the highest IoU, provided it reaches `iou_threshold`.
 * Equal IoU goes to the lower ground-truth index.
 */
inline MatchOutcome match_predictions(std::span<const Detection> preds, std::span<const GroundTruthObject> gts,
                                      double iou_threshold) {
    MatchOutcome out;
    out.order.resize(preds.size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
    out.tp.assign(preds.size(), false);
    std::vector<bool> used(gts.size(), false);
    std::size_t matched = 0;
    for (auto p : out.order) {
        double best = -1;
        std::size_t best_gt = gts.size();
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (used[g]) {
                continue;
            }
            const double o = iou(preds[p].box, gts[g].box);
            if (o >= iou_threshold && o > best) {
                best = o;
                best_gt = g;
            }
        }
        if (best_gt < gts.size()) {
            used[best_gt] = true;
            out.tp[p] = true;
            ++matched;
        }
    }
    out.false_negatives = gts.size() - matched;
    return out;
}

} // namespace pitchtrack

#endif
