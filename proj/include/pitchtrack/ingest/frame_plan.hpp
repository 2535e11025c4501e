#ifndef PITCHTRACK_INGEST_FRAME_PLAN_HPP
#define PITCHTRACK_INGEST_FRAME_PLAN_HPP

#include <cstdint>
#include <vector>

#include "../core/detection.hpp"
#include "../core/error.hpp"

namespace pitchtrack {

/// Frames 0, stride, 2*stride, ... below `total`.
inline std::vector<FrameIndex> sample_frame_indices(std::int64_t total, std::int64_t stride) {
    if (stride < 1) {
        throw ConfigError("frame stride must be >= 1, got " + std::to_string(stride));
    }
    if (total < 0) {
        throw ConfigError("frame count must be >= 0, got " + std::to_string(total));
    }
    std::vector<FrameIndex> out;
    out.reserve(static_cast<std::size_t>((total + stride - 1) / stride));
    for (FrameIndex f = 0; f < total; f += stride) {
        out.push_back(f);
    }
    return out;
}

struct FramePlan {
    std::int64_t total_frames = 0;
    std::int64_t stride = 30;
    std::vector<FrameIndex> indices;

    static FramePlan make(std::int64_t total, std::int64_t stride) {
        return {total, stride, sample_frame_indices(total, stride)};
    }

    bool contains(FrameIndex f) const { return f >= 0 && f < total_frames && f % stride == 0; }
};

} // namespace pitchtrack

#endif
