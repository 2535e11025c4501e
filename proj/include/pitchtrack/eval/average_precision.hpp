#ifndef PITCHTRACK_EVAL_AVERAGE_PRECISION_HPP
#define PITCHTRACK_EVAL_AVERAGE_PRECISION_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace pitchtrack {

inline constexpr int kRecallSamples = 101;

/**
 * 101-point interpolated average precision.
 *
 * `tp` holds true/false-positive flags already sorted by descending score.
 * The precision envelope (running maximum from the right) is sampled at
 * recall 0.00, 0.01, ..., 1.00; unreachable recall levels contribute 0.
 * Returns nullopt when there is neither ground truth nor any prediction.
 */
inline std::optional<double> average_precision(const std::vector<bool>& tp, std::size_t total_gt) {
    if (total_gt == 0) {
        if (tp.empty()) {
            return std::nullopt;
        }
        return 0.0;
    }
    const std::size_t n = tp.size();
    std::vector<std::size_t> cum_tp(n);
    std::vector<double> envelope(n);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += tp[i] ? 1 : 0;
        cum_tp[i] = hits;
        envelope[i] = static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    for (std::size_t i = n; i-- > 1;) {
        envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
    }
    double sum = 0;
    std::size_t k = 0;
    for (int t = 0; t < kRecallSamples; ++t) {
        // recall_k >= t/100  <=>  100 * tp_k >= t * G, compared exactly in integers.
        while (k < n && 100 * cum_tp[k] < static_cast<std::size_t>(t) * total_gt) {
            ++k;
        }
        if (k == n) {
            break;
        }
        sum += envelope[k];
    }
    return sum / kRecallSamples;
}

} // namespace pitchtrack

#endif
