#ifndef PITCHTRACK_RENDER_RENDER_HPP
#define PITCHTRACK_RENDER_RENDER_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "../core/classes.hpp"
#include "../tracker/track_io.hpp"
#include "raster.hpp"

namespace pitchtrack {

struct RenderOptions {
    int frame_width = 1920;
    int frame_height = 1080;
    /// Output pixels per frame pixel.
    double scale = 1.0;
    /// Only frames divisible by this are drawn.
    FrameIndex frame_stride = 1;
};

inline constexpr Rgb kBackground{20, 90, 20};
inline constexpr Rgb kLabelColor{255, 255, 255};

inline Rgb class_color(ClassLabel c) {
    switch (c) {
    case ClassLabel::ball: return {255, 230, 0};
    case ClassLabel::goalkeeper: return {255, 120, 0};
    case ClassLabel::player: return {0, 150, 255};
    case ClassLabel::referee: return {230, 0, 230};
    }
    return {0, 0, 0};
}

/// Pixel rectangle [x0, x1) x [y0, y1) covered by a frame-space box at `scale`.
struct PixelRect {
    int x0, y0, x1, y1;
};

inline PixelRect pixel_rect(const BoundingBox& b, double scale) {
    PixelRect r{static_cast<int>(std::lround(b.x1 * scale)), static_cast<int>(std::lround(b.y1 * scale)),
                static_cast<int>(std::lround(b.x2 * scale)), static_cast<int>(std::lround(b.y2 * scale))};
    r.x1 = std::max(r.x1, r.x0 + 1);
    r.y1 = std::max(r.y1, r.y0 + 1);
    return r;
}

inline Canvas render_frame(const std::vector<TrackRow>& rows, const RenderOptions& opt) {
    const int w = std::max(1, static_cast<int>(std::lround(opt.frame_width * opt.scale)));
    const int h = std::max(1, static_cast<int>(std::lround(opt.frame_height * opt.scale)));
    Canvas canvas(w, h, kBackground);
    for (const auto& r : rows) {
        const auto px = pixel_rect(r.box, opt.scale);
        canvas.stroke_rect(px.x0, px.y0, px.x1, px.y1, class_color(r.cls));
    }
    // Labels go on top so boxes never hide them.
    for (const auto& r : rows) {
        const auto px = pixel_rect(r.box, opt.scale);
        std::string label = std::to_string(r.track_id);
        if (r.team) {
            label += " T" + std::to_string(*r.team);
        }
        const int text_y = px.y0 >= 12 ? px.y0 - 12 : px.y1 + 2;
        canvas.draw_text(px.x0, text_y, label, kLabelColor);
    }
    return canvas;
}

/**
 * Writes `frame_NNNNNN.ppm` for every frame that has at least one track row
 * and falls on the frame stride. Returns the written paths in frame order.
 */
inline std::vector<std::filesystem::path> render_frames(const std::vector<TrackRow>& rows, const RenderOptions& opt,
                                                        const std::filesystem::path& out_dir) {
    if (opt.frame_stride < 1 || !(opt.scale > 0)) {
        throw ConfigError("render: frame stride must be >= 1 and scale > 0");
    }
    std::map<FrameIndex, std::vector<TrackRow>> frames;
    for (const auto& r : rows) {
        if (r.frame % opt.frame_stride == 0) {
            frames[r.frame].push_back(r);
        }
    }
    std::vector<std::filesystem::path> written;
    if (frames.empty()) {
        return written;
    }
    std::filesystem::create_directories(out_dir);
    for (const auto& [frame, frame_rows] : frames) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06lld.ppm", static_cast<long long>(frame));
        const auto path = out_dir / name;
        render_frame(frame_rows, opt).write_ppm(path);
        written.push_back(path);
    }
    return written;
}

} // namespace pitchtrack

#endif
