#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace forgery {

/// Owned 8-bit raster, grayscale (1 channel) or interleaved RGB (3 channels),
/// row-major. `data.size() == width * height * channels` always holds for a
/// valid buffer; operations check this on entry.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    static ImageBuffer create(int width, int height, int channels,
                              std::uint8_t fill = 0);

    bool empty() const { return width == 0 || height == 0; }
    std::size_t size_bytes() const {
        return static_cast<std::size_t>(width) * height * channels;
    }
    std::size_t row_stride() const {
        return static_cast<std::size_t>(width) * channels;
    }

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool operator==(const ImageBuffer&) const = default;
};

/// Throws ParameterError unless the buffer satisfies the ImageBuffer
/// invariants (positive dims, 1 or 3 channels, exact data length).
void require_valid(const ImageBuffer& img, const char* op_name);

/// Axis-aligned pixel rectangle, half-open: covers x..x+w-1, y..y+h-1.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }
    int bottom() const { return y + h; }
    long long area() const { return static_cast<long long>(w) * h; }
    bool empty() const { return w <= 0 || h <= 0; }

    bool contains(int px, int py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }
    bool inside(int img_w, int img_h) const {
        return x >= 0 && y >= 0 && w > 0 && h > 0 && right() <= img_w &&
               bottom() <= img_h;
    }

    Rect intersect(const Rect& o) const;
    /// Clip to [0,img_w) x [0,img_h); may produce an empty rect.
    Rect clamped(int img_w, int img_h) const;

    bool operator==(const Rect&) const = default;
};

} // namespace forgery
