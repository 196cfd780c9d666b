#include "forgery/image.hpp"

#include <algorithm>
#include <string>

#include "forgery/errors.hpp"

namespace forgery {

ImageBuffer ImageBuffer::create(int width, int height, int channels,
                                std::uint8_t fill) {
    if (width <= 0 || height <= 0)
        throw ParameterError("ImageBuffer: dimensions must be positive");
    if (channels != 1 && channels != 3)
        throw ParameterError("ImageBuffer: channels must be 1 or 3");
    ImageBuffer img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

void require_valid(const ImageBuffer& img, const char* op_name) {
    if (img.width <= 0 || img.height <= 0)
        throw ParameterError(std::string(op_name) + ": empty image");
    if (img.channels != 1 && img.channels != 3)
        throw ParameterError(std::string(op_name) + ": channels must be 1 or 3");
    if (img.data.size() != img.size_bytes())
        throw ParameterError(std::string(op_name) +
                             ": data length does not match dimensions");
}

Rect Rect::intersect(const Rect& o) const {
    const int x0 = std::max(x, o.x);
    const int y0 = std::max(y, o.y);
    const int x1 = std::min(right(), o.right());
    const int y1 = std::min(bottom(), o.bottom());
    return Rect{x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

Rect Rect::clamped(int img_w, int img_h) const {
    return intersect(Rect{0, 0, img_w, img_h});
}

} // namespace forgery
