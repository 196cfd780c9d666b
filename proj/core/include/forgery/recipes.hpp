#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "forgery/image.hpp"
#include "forgery/landmarks.hpp"
#include "forgery/rng.hpp"

namespace forgery {

struct CutoutParams {
    double per_region_prob = 0.5;
    int pad = 4;
    /// Resample selections until at least one region is erased. Disabled only
    /// by tests (an untouched output would be a mislabeled real image).
    bool ensure_at_least_one = true;
};

struct CropParams {
    int crop_size = 150;
    int out_size = 512;
};

struct OverlayParams {
    int num_shifts = 4;
    int max_shift = 20;
};

struct CartoonParams {
    int k_colors = 8;
    int block = 9;
    double c = 2.0;
    int median_kernel = 7;
    int kmeans_max_iters = 20;
};

struct SketchParams {
    double blur_sigma = 6.0;
    int blur_kernel = 21;
};

struct BinarizeParams {
    int center = 128;
    int jitter = 20;
};

struct RecipeParams {
    CutoutParams cutout;
    CropParams crop;
    OverlayParams overlay;
    CartoonParams cartoon;
    SketchParams sketch;
    BinarizeParams binarize;
};

/// One generated negative sample. Every recipe output is labeled "fake" by
/// construction. `params_used` records the resolved draws (boxes, colors,
/// shifts, thresholds) for the run manifest.
struct GeneratedSample {
    ImageBuffer image;
    std::string recipe;
    std::string source_id;
    std::uint64_t seed = 0;
    std::string label = "fake";
    nlohmann::json params_used;
};

/// Erase each of the six facial regions independently with probability
/// per_region_prob, filling the padded region box with one uniformly random
/// color. Pixels outside the selected boxes are byte-identical to the input.
GeneratedSample cutout_facial_regions(const ImageBuffer& img,
                                      const LandmarkSet& lms,
                                      const CutoutParams& params,
                                      DeterministicRng& rng);

/// Enlarge a uniformly placed crop_size x crop_size area to
/// out_size x out_size.
GeneratedSample local_crop_enlarge(const ImageBuffer& img,
                                   const CropParams& params,
                                   DeterministicRng& rng);

/// Grayscale, translate num_shifts times in random directions (never (0,0)),
/// output the per-pixel mean of the shifted copies.
GeneratedSample gray_translate_overlay(const ImageBuffer& img,
                                       const OverlayParams& params,
                                       DeterministicRng& rng);

/// Adaptive-threshold edges over a k-means quantized, median-smoothed image;
/// edge pixels become black contour lines. Requires a color input.
GeneratedSample cartoonize(const ImageBuffer& img, const CartoonParams& params,
                           DeterministicRng& rng);

/// Color-dodge of the grayscale image by its blurred inverse.
GeneratedSample sketch(const ImageBuffer& img, const SketchParams& params,
                       DeterministicRng& rng);

/// Threshold the grayscale image at a uniform integer near `center`:
/// strictly greater -> 255, else 0.
GeneratedSample binarize_random(const ImageBuffer& img,
                                const BinarizeParams& params,
                                DeterministicRng& rng);

struct OnlinePolicy {
    int out_size = 256;
    double hflip_prob = 0.5;
    double invert_prob = 0.2;
    double contrast_lo = 0.6;
    double contrast_hi = 1.4;
    double rotate_max_deg = 30.0;
};

/// Audit record of the draws one online_augment call made.
struct AugmentTrace {
    bool flipped = false;
    int policy_op = 0; ///< 0 invert, 1 contrast, 2 rotate
    bool invert_applied = false;
    double contrast_factor = 0.0;
    double rotate_degrees = 0.0;
};

/// Online chain: resize to out_size^2, horizontal flip with hflip_prob, then
/// one policy op chosen uniformly from {invert, contrast, rotate}.
ImageBuffer online_augment(const ImageBuffer& img, DeterministicRng& rng,
                           const OnlinePolicy& policy = {},
                           AugmentTrace* trace = nullptr);

enum class Recipe { cutout, crop, overlay, cartoon, sketch, binarize };

const char* recipe_name(Recipe r);
std::optional<Recipe> recipe_from_name(std::string_view name);
bool recipe_needs_landmarks(Recipe r);

/// Dispatch by recipe id; `lms` may be null for recipes that do not use
/// landmarks.
GeneratedSample run_recipe(Recipe recipe, const ImageBuffer& img,
                           const LandmarkSet* lms, const RecipeParams& params,
                           DeterministicRng& rng);

} // namespace forgery
