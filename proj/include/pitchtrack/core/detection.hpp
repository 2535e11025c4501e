#ifndef PITCHTRACK_CORE_DETECTION_HPP
#define PITCHTRACK_CORE_DETECTION_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "classes.hpp"
#include "geometry.hpp"

namespace pitchtrack {

using FrameIndex = std::int64_t;

/// One classified, scored box on one frame.
struct Detection {
    FrameIndex frame = 0;
    ClassLabel cls = ClassLabel::player;
    double score = 0;
    BoundingBox box;

    friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr std::size_t kEmbeddingDim = 512;

/// Appearance vector attached to detection `det_index` of frame `frame`.
struct Embedding {
    FrameIndex frame = 0;
    std::size_t det_index = 0;
    std::vector<double> vec;

    friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Ground-truth box with a stable object identity.
struct GroundTruthObject {
    FrameIndex frame = 0;
    ClassLabel cls = ClassLabel::player;
    BoundingBox box;
    int object_id = 0;

    friend bool operator==(const GroundTruthObject&, const GroundTruthObject&) = default;
};

} // namespace pitchtrack

#endif
