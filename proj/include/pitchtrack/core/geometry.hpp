#ifndef PITCHTRACK_CORE_GEOMETRY_HPP
#define PITCHTRACK_CORE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace pitchtrack {

/**
 * Axis-aligned box in corner form, in source-frame pixel coordinates.
 *
 * Boxes are treated as continuous half-open rectangles: the area is
 * `(x2 - x1) * (y2 - y1)` with no +1 pixel correction.
 */
struct BoundingBox {
    double x1 = 0;
    double y1 = 0;
    double x2 = 0;
    double y2 = 0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }

    bool valid() const {
        return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
               x1 >= 0 && y1 >= 0 && x2 > x1 && y2 > y1;
    }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline void require_valid(const BoundingBox& b) {
    if (!b.valid()) {
        std::ostringstream msg;
        msg << "invalid box [" << b.x1 << ", " << b.y1 << ", " << b.x2 << ", " << b.y2 << "]";
        throw InvalidGeometry(msg.str());
    }
}

/// Kalman measurement form: center, aspect ratio (w/h) and height.
struct CenterForm {
    double cx = 0;
    double cy = 0;
    double a = 1;
    double h = 1;

    friend bool operator==(const CenterForm&, const CenterForm&) = default;
};

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
    const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    if (w <= 0 || h <= 0) {
        return 0;
    }
    return w * h;
}

/// Intersection over union; 0 for disjoint boxes.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double inter = intersection_area(a, b);
    if (inter <= 0) {
        return 0;
    }
    const double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

inline CenterForm to_center_form(const BoundingBox& b) {
    const double w = b.x2 - b.x1;
    const double h = b.y2 - b.y1;
    return {(b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2, w / h, h};
}

inline BoundingBox to_box(const CenterForm& c) {
    if (!(c.h > 0) || !(c.a > 0) || !std::isfinite(c.h) || !std::isfinite(c.a)) {
        std::ostringstream msg;
        msg << "degenerate center form (a=" << c.a << ", h=" << c.h << ")";
        throw InvalidGeometry(msg.str());
    }
    const double w = c.a * c.h;
    return {c.cx - w / 2, c.cy - c.h / 2, c.cx + w / 2, c.cy + c.h / 2};
}

} // namespace pitchtrack

#endif
