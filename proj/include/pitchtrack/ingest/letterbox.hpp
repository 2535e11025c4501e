#ifndef PITCHTRACK_INGEST_LETTERBOX_HPP
#define PITCHTRACK_INGEST_LETTERBOX_HPP

#include <algorithm>
#include <optional>

#include "../core/error.hpp"
#include "../core/geometry.hpp"

namespace pitchtrack {

/// Aspect-preserving resize of a frame into a square model input, padded symmetrically.
struct LetterboxTransform {
    double orig_width = 0;
    double orig_height = 0;
    double model_size = 1280;
    double scale = 1;
    double pad_x = 0;
    double pad_y = 0;

    static LetterboxTransform make(double orig_width, double orig_height, double model_size = 1280) {
        if (!(orig_width > 0) || !(orig_height > 0) || !(model_size > 0)) {
            throw ConfigError("letterbox dimensions must be positive");
        }
        LetterboxTransform t;
        t.orig_width = orig_width;
        t.orig_height = orig_height;
        t.model_size = model_size;
        t.scale = model_size / std::max(orig_width, orig_height);
        t.pad_x = (model_size - orig_width * t.scale) / 2;
        t.pad_y = (model_size - orig_height * t.scale) / 2;
        return t;
    }
};

/// Frame space to model space.
inline BoundingBox letterbox(const BoundingBox& b, const LetterboxTransform& t) {
    return {b.x1 * t.scale + t.pad_x, b.y1 * t.scale + t.pad_y, b.x2 * t.scale + t.pad_x,
            b.y2 * t.scale + t.pad_y};
}

/**
 * Model space back to frame space, clamped to the original frame.
 *
 * Returns nullopt when the clamped box is empty (for example a box lying
 * entirely inside a padding band).
 */
inline std::optional<BoundingBox> unletterbox(const BoundingBox& b, const LetterboxTransform& t) {
    auto map_x = [&](double x) { return std::clamp((x - t.pad_x) / t.scale, 0.0, t.orig_width); };
    auto map_y = [&](double y) { return std::clamp((y - t.pad_y) / t.scale, 0.0, t.orig_height); };
    BoundingBox out{map_x(b.x1), map_y(b.y1), map_x(b.x2), map_y(b.y2)};
    if (!(out.x2 > out.x1) || !(out.y2 > out.y1)) {
        return std::nullopt;
    }
    return out;
}

} // namespace pitchtrack

#endif
