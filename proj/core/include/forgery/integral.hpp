#pragma once

#include <cstdint>
#include <vector>

#include "forgery/image.hpp"

namespace forgery {

/// Summed-area tables of pixel values and squared pixel values, each
/// (width+1) x (height+1) with a zero top row and left column. Any rectangle
/// sum is four lookups.
struct IntegralPair {
    int width = 0;
    int height = 0;
    std::vector<std::uint64_t> sat;
    std::vector<std::uint64_t> sqsat;

    std::uint64_t sat_at(int x, int y) const {
        return sat[static_cast<std::size_t>(y) * (width + 1) + x];
    }
    std::uint64_t sqsat_at(int x, int y) const {
        return sqsat[static_cast<std::size_t>(y) * (width + 1) + x];
    }

    /// Sum of pixels in r; r must lie inside the image.
    std::uint64_t rect_sum(const Rect& r) const {
        return (sat_at(r.x, r.y) + sat_at(r.right(), r.bottom())) -
               (sat_at(r.right(), r.y) + sat_at(r.x, r.bottom()));
    }
    std::uint64_t rect_sq_sum(const Rect& r) const {
        return (sqsat_at(r.x, r.y) + sqsat_at(r.right(), r.bottom())) -
               (sqsat_at(r.right(), r.y) + sqsat_at(r.x, r.bottom()));
    }
};

/// Build both tables from a grayscale image.
IntegralPair integral_images(const ImageBuffer& img);

} // namespace forgery
