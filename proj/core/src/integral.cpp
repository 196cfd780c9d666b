#include "forgery/integral.hpp"

#include "forgery/errors.hpp"

namespace forgery {

IntegralPair integral_images(const ImageBuffer& img) {
    require_valid(img, "integral_images");
    if (img.channels != 1)
        throw ParameterError("integral_images: grayscale input required");

    IntegralPair out;
    out.width = img.width;
    out.height = img.height;
    const int stride = img.width + 1;
    out.sat.assign(static_cast<std::size_t>(stride) * (img.height + 1), 0);
    out.sqsat.assign(out.sat.size(), 0);

    for (int y = 0; y < img.height; ++y) {
        std::uint64_t row_sum = 0;
        std::uint64_t row_sq = 0;
        const std::size_t above = static_cast<std::size_t>(y) * stride;
        const std::size_t here = above + stride;
        for (int x = 0; x < img.width; ++x) {
            const std::uint64_t v = img.at(x, y);
            row_sum += v;
            row_sq += v * v;
            out.sat[here + x + 1] = out.sat[above + x + 1] + row_sum;
            out.sqsat[here + x + 1] = out.sqsat[above + x + 1] + row_sq;
        }
    }
    return out;
}

} // namespace forgery
