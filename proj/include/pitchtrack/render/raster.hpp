#ifndef PITCHTRACK_RENDER_RASTER_HPP
#define PITCHTRACK_RENDER_RASTER_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "../core/error.hpp"

namespace pitchtrack {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster stored row-major; reads and writes binary PPM (P6).
class Canvas {
public:
    Canvas(int width, int height, Rgb fill = {}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw ConfigError("canvas size must be positive");
        }
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb at(int x, int y) const { return pixels_[index(x, y)]; }

    void set(int x, int y, Rgb c) {
        if (x >= 0 && y >= 0 && x < width_ && y < height_) {
            pixels_[index(x, y)] = c;
        }
    }

    void fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                set(x, y, c);
            }
        }
    }

    /// Outline of the half-open pixel rectangle [x0, x1) x [y0, y1), drawn inward.
    void stroke_rect(int x0, int y0, int x1, int y1, Rgb c, int thickness = 2) {
        for (int t = 0; t < thickness; ++t) {
            for (int x = x0; x < x1; ++x) {
                set(x, y0 + t, c);
                set(x, y1 - 1 - t, c);
            }
            for (int y = y0; y < y1; ++y) {
                set(x0 + t, y, c);
                set(x1 - 1 - t, y, c);
            }
        }
    }

    /// Draws `text` with a 3x5 pixel font scaled by `scale`; unknown glyphs are blank.
    void draw_text(int x, int y, std::string_view text, Rgb c, int scale = 2) {
        for (char ch : text) {
            const auto& glyph = glyph_for(ch);
            for (int row = 0; row < 5; ++row) {
                for (int col = 0; col < 3; ++col) {
                    if (glyph[static_cast<std::size_t>(row)] & (4 >> col)) {
                        fill_rect(x + col * scale, y + row * scale, x + (col + 1) * scale, y + (row + 1) * scale, c);
                    }
                }
            }
            x += 4 * scale;
        }
    }

    void write_ppm(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out << "P6\n" << width_ << ' ' << height_ << "\n255\n";
        for (const auto& p : pixels_) {
            const char bytes[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
            out.write(bytes, 3);
        }
        if (!out) {
            throw IoError("failed writing " + path.string());
        }
    }

    static Canvas read_ppm(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::string magic;
        int w = 0, h = 0, maxval = 0;
        in >> magic >> w >> h >> maxval;
        if (!in || magic != "P6" || maxval != 255) {
            throw IoError("not an 8-bit P6 image: " + path.string());
        }
        in.get();
        Canvas c(w, h);
        for (auto& p : c.pixels_) {
            char bytes[3];
            in.read(bytes, 3);
            p = {static_cast<std::uint8_t>(bytes[0]), static_cast<std::uint8_t>(bytes[1]),
                 static_cast<std::uint8_t>(bytes[2])};
        }
        if (!in) {
            throw IoError("truncated image: " + path.string());
        }
        return c;
    }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    // Rows top to bottom, 3 bits each (MSB = left column).
    static const std::array<std::uint8_t, 5>& glyph_for(char ch) {
        static const std::array<std::array<std::uint8_t, 5>, 13> glyphs{{
            {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
            {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
            {7, 2, 2, 2, 2}, // T
            {0, 0, 7, 0, 0}, // -
            {0, 0, 0, 0, 0}, // blank
        }};
        if (ch >= '0' && ch <= '9') {
            return glyphs[static_cast<std::size_t>(ch - '0')];
        }
        if (ch == 'T') {
            return glyphs[10];
        }
        if (ch == '-') {
            return glyphs[11];
        }
        return glyphs[12];
    }

    int width_;
    int height_;
    std::vector<Rgb> pixels_;
};

} // namespace pitchtrack

#endif
