#pragma once

#include <cstdint>
#include <vector>

#include "forgery/image.hpp"
#include "forgery/rng.hpp"

namespace forgery {

/// Rec. 601 luma: round(0.299 R + 0.587 G + 0.114 B). 1-channel input is
/// returned unchanged.
ImageBuffer to_grayscale(const ImageBuffer& img);

/// Bilinear resampling with half-pixel center alignment; sampling is clamped
/// to the source edges. A same-size resize is pixel-identical to the input.
ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h);

/// Separable Gaussian convolution. kernel must be odd and >= 3; borders are
/// edge-replicated. Constant images are preserved exactly.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma, int kernel);

/// Median of the kernel x kernel neighborhood, grayscale input only,
/// edge-replicated borders. kernel must be odd and >= 3.
ImageBuffer median_filter(const ImageBuffer& img, int kernel);

/// out(p) = 255 if img(p) > local_mean_block(p) - c else 0. The local mean is
/// the exact block x block average with edge-replicated borders. block must
/// be odd and >= 3. Grayscale input only.
ImageBuffer adaptive_threshold(const ImageBuffer& img, int block, double c);

struct KMeansResult {
    ImageBuffer image;                ///< every pixel replaced by its palette color
    std::vector<std::uint8_t> palette; ///< k' * channels bytes, k' <= k
    int iterations = 0;
    std::vector<double> sse_history;  ///< total squared error after each Lloyd pass
};

/// Color quantization: k-means++ seeding from rng, Lloyd iterations until the
/// assignment fixpoint or max_iters passes. Ties in nearest-centroid go to the
/// lowest centroid index; centroids are kept in double precision and rounded
/// only for the output palette. If the image has fewer than k distinct colors
/// the palette shrinks to that count and the output equals the input.
KMeansResult kmeans_quantize(const ImageBuffer& img, int k, int max_iters,
                             DeterministicRng& rng);

/// Shifted copy; vacated pixels are zero-filled. Dimensions are preserved.
ImageBuffer translate(const ImageBuffer& img, int dx, int dy);

/// 255 - p per channel.
ImageBuffer invert(const ImageBuffer& img);

/// clamp(mean + factor * (p - mean)) with mean = the per-image grayscale mean
/// (a single scalar, also used for color images). factor 1 is the identity.
ImageBuffer adjust_contrast(const ImageBuffer& img, double factor);

/// Rotation about the image center, bilinear sampling, zero fill outside the
/// source. Dimensions are preserved; 0 degrees is the identity.
ImageBuffer rotate(const ImageBuffer& img, double degrees);

/// Column mirror.
ImageBuffer hflip(const ImageBuffer& img);

} // namespace forgery
