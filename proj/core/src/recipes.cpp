#include "forgery/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "forgery/errors.hpp"
#include "forgery/imaging.hpp"

namespace forgery {

namespace {

void fill_rect(ImageBuffer& img, const Rect& box, const std::uint8_t* color) {
    for (int y = box.y; y < box.bottom(); ++y)
        for (int x = box.x; x < box.right(); ++x)
            for (int c = 0; c < img.channels; ++c)
                img.at(x, y, c) = color[c];
}

ImageBuffer extract(const ImageBuffer& img, const Rect& box) {
    ImageBuffer out = ImageBuffer::create(box.w, box.h, img.channels);
    const int ch = img.channels;
    for (int y = 0; y < box.h; ++y)
        std::copy_n(img.data.data() +
                        (static_cast<std::size_t>(box.y + y) * img.width +
                         box.x) * ch,
                    static_cast<std::size_t>(box.w) * ch,
                    out.data.data() + static_cast<std::size_t>(y) * box.w * ch);
    return out;
}

} // namespace

GeneratedSample cutout_facial_regions(const ImageBuffer& img,
                                      const LandmarkSet& lms,
                                      const CutoutParams& params,
                                      DeterministicRng& rng) {
    require_valid(img, "cutout_facial_regions");
    if (params.per_region_prob < 0.0 || params.per_region_prob > 1.0)
        throw ParameterError("cutout: per_region_prob must be in [0,1]");
    if (params.ensure_at_least_one && params.per_region_prob <= 0.0)
        throw ParameterError(
            "cutout: cannot force a selection with zero per-region probability");

    const auto& regions = default_regions();
    struct Usable {
        const FacialRegion* region;
        Rect box;
    };
    std::vector<Usable> usable;
    for (const FacialRegion& region : regions) {
        try {
            usable.push_back(
                {&region, region_bbox(lms, region, params.pad, img.width,
                                      img.height)});
        } catch (const ValidationError&) {
            // Degenerate or off-image region: not a cutout candidate.
        }
    }
    if (usable.empty())
        throw InapplicableError(
            "cutout: every region box is degenerate for this image");

    std::vector<bool> selected(usable.size(), false);
    for (;;) {
        bool any = false;
        for (std::size_t i = 0; i < usable.size(); ++i) {
            selected[i] = rng.bernoulli(params.per_region_prob);
            any = any || selected[i];
        }
        if (any || !params.ensure_at_least_one)
            break;
    }

    GeneratedSample sample;
    sample.image = img;
    sample.recipe = "cutout";
    sample.params_used = {{"per_region_prob", params.per_region_prob},
                          {"pad", params.pad},
                          {"regions", nlohmann::json::array()}};
    for (std::size_t i = 0; i < usable.size(); ++i) {
        if (!selected[i])
            continue;
        std::uint8_t color[3] = {0, 0, 0};
        for (int c = 0; c < img.channels; ++c)
            color[c] = static_cast<std::uint8_t>(rng.uniform_u32(256));
        fill_rect(sample.image, usable[i].box, color);
        nlohmann::json entry = {
            {"name", usable[i].region->name},
            {"box", {usable[i].box.x, usable[i].box.y, usable[i].box.w,
                     usable[i].box.h}},
            {"color", nlohmann::json::array()}};
        for (int c = 0; c < img.channels; ++c)
            entry["color"].push_back(color[c]);
        sample.params_used["regions"].push_back(std::move(entry));
    }
    return sample;
}

GeneratedSample local_crop_enlarge(const ImageBuffer& img,
                                   const CropParams& params,
                                   DeterministicRng& rng) {
    require_valid(img, "local_crop_enlarge");
    if (params.crop_size <= 0 || params.out_size <= 0)
        throw ParameterError("crop: crop_size and out_size must be > 0");
    if (img.width < params.crop_size || img.height < params.crop_size)
        throw InapplicableError("crop: source smaller than crop_size");

    const int x = static_cast<int>(
        rng.uniform_u32(static_cast<std::uint32_t>(img.width - params.crop_size) + 1));
    const int y = static_cast<int>(
        rng.uniform_u32(static_cast<std::uint32_t>(img.height - params.crop_size) + 1));
    const Rect box{x, y, params.crop_size, params.crop_size};

    GeneratedSample sample;
    sample.image = resize_bilinear(extract(img, box), params.out_size,
                                   params.out_size);
    sample.recipe = "crop";
    sample.params_used = {{"crop", {box.x, box.y, box.w, box.h}},
                          {"out_size", params.out_size}};
    return sample;
}

GeneratedSample gray_translate_overlay(const ImageBuffer& img,
                                       const OverlayParams& params,
                                       DeterministicRng& rng) {
    require_valid(img, "gray_translate_overlay");
    if (params.num_shifts < 1)
        throw ParameterError("overlay: num_shifts must be >= 1");
    if (params.max_shift < 1)
        throw ParameterError("overlay: max_shift must be >= 1");

    const ImageBuffer gray = to_grayscale(img);
    std::vector<std::pair<int, int>> shifts;
    for (int i = 0; i < params.num_shifts; ++i) {
        int dx = 0;
        int dy = 0;
        do {
            dx = rng.uniform_int(-params.max_shift, params.max_shift);
            dy = rng.uniform_int(-params.max_shift, params.max_shift);
        } while (dx == 0 && dy == 0);
        shifts.emplace_back(dx, dy);
    }

    std::vector<std::uint32_t> acc(gray.data.size(), 0);
    for (const auto& [dx, dy] : shifts) {
        const ImageBuffer shifted = translate(gray, dx, dy);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += shifted.data[i];
    }

    GeneratedSample sample;
    sample.image = ImageBuffer::create(gray.width, gray.height, 1);
    const double inv = 1.0 / params.num_shifts;
    for (std::size_t i = 0; i < acc.size(); ++i)
        sample.image.data[i] =
            static_cast<std::uint8_t>(std::lround(acc[i] * inv));
    sample.recipe = "overlay";
    sample.params_used = {{"max_shift", params.max_shift},
                          {"shifts", nlohmann::json::array()}};
    for (const auto& [dx, dy] : shifts)
        sample.params_used["shifts"].push_back({dx, dy});
    return sample;
}

GeneratedSample cartoonize(const ImageBuffer& img, const CartoonParams& params,
                           DeterministicRng& rng) {
    require_valid(img, "cartoonize");
    if (img.channels != 3)
        throw InapplicableError("cartoon: color input required");
    if (params.k_colors < 2)
        throw ParameterError("cartoon: k_colors must be >= 2");

    const ImageBuffer edges =
        adaptive_threshold(to_grayscale(img), params.block, params.c);
    KMeansResult quant =
        kmeans_quantize(img, params.k_colors, params.kmeans_max_iters, rng);

    // Median-smooth each channel plane independently.
    ImageBuffer smooth = ImageBuffer::create(img.width, img.height, 3);
    for (int c = 0; c < 3; ++c) {
        ImageBuffer plane = ImageBuffer::create(img.width, img.height, 1);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                plane.at(x, y) = quant.image.at(x, y, c);
        plane = median_filter(plane, params.median_kernel);
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                smooth.at(x, y, c) = plane.at(x, y);
    }

    GeneratedSample sample;
    sample.image = ImageBuffer::create(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (edges.at(x, y) == 255)
                for (int c = 0; c < 3; ++c)
                    sample.image.at(x, y, c) = smooth.at(x, y, c);
    sample.recipe = "cartoon";
    sample.params_used = {{"k_colors", params.k_colors},
                          {"block", params.block},
                          {"c", params.c},
                          {"median_kernel", params.median_kernel},
                          {"kmeans_iterations", quant.iterations},
                          {"palette", quant.palette}};
    return sample;
}

GeneratedSample sketch(const ImageBuffer& img, const SketchParams& params,
                       DeterministicRng& rng) {
    (void)rng; // draw-free; signature kept uniform with the other recipes
    require_valid(img, "sketch");
    const ImageBuffer gray = to_grayscale(img);
    const ImageBuffer blurred =
        gaussian_blur(invert(gray), params.blur_sigma, params.blur_kernel);

    GeneratedSample sample;
    sample.image = ImageBuffer::create(gray.width, gray.height, 1);
    for (std::size_t i = 0; i < gray.data.size(); ++i) {
        const int dodge_base = 255 - blurred.data[i];
        const double ratio = gray.data[i] * 255.0 / std::max(dodge_base, 1);
        sample.image.data[i] = static_cast<std::uint8_t>(
            std::clamp(std::lround(ratio), 0L, 255L));
    }
    sample.recipe = "sketch";
    sample.params_used = {{"blur_sigma", params.blur_sigma},
                          {"blur_kernel", params.blur_kernel}};
    return sample;
}

GeneratedSample binarize_random(const ImageBuffer& img,
                                const BinarizeParams& params,
                                DeterministicRng& rng) {
    require_valid(img, "binarize_random");
    if (params.jitter < 0)
        throw ParameterError("binarize: jitter must be >= 0");

    const int threshold =
        rng.uniform_int(params.center - params.jitter,
                        params.center + params.jitter);
    const ImageBuffer gray = to_grayscale(img);

    GeneratedSample sample;
    sample.image = ImageBuffer::create(gray.width, gray.height, 1);
    for (std::size_t i = 0; i < gray.data.size(); ++i)
        sample.image.data[i] = gray.data[i] > threshold ? 255 : 0;
    sample.recipe = "binarize";
    sample.params_used = {{"threshold", threshold},
                          {"center", params.center},
                          {"jitter", params.jitter}};
    return sample;
}

ImageBuffer online_augment(const ImageBuffer& img, DeterministicRng& rng,
                           const OnlinePolicy& policy, AugmentTrace* trace) {
    require_valid(img, "online_augment");
    ImageBuffer out = resize_bilinear(img, policy.out_size, policy.out_size);

    AugmentTrace local;
    local.flipped = rng.bernoulli(policy.hflip_prob);
    if (local.flipped)
        out = hflip(out);

    local.policy_op = static_cast<int>(rng.uniform_u32(3));
    switch (local.policy_op) {
    case 0:
        local.invert_applied = rng.bernoulli(policy.invert_prob);
        if (local.invert_applied)
            out = invert(out);
        break;
    case 1:
        local.contrast_factor =
            rng.uniform_real(policy.contrast_lo, policy.contrast_hi);
        out = adjust_contrast(out, local.contrast_factor);
        break;
    default:
        local.rotate_degrees =
            rng.uniform_real(-policy.rotate_max_deg, policy.rotate_max_deg);
        out = rotate(out, local.rotate_degrees);
        break;
    }
    if (trace)
        *trace = local;
    return out;
}

const char* recipe_name(Recipe r) {
    switch (r) {
    case Recipe::cutout:
        return "cutout";
    case Recipe::crop:
        return "crop";
    case Recipe::overlay:
        return "overlay";
    case Recipe::cartoon:
        return "cartoon";
    case Recipe::sketch:
        return "sketch";
    case Recipe::binarize:
        return "binarize";
    }
    return "unknown";
}

std::optional<Recipe> recipe_from_name(std::string_view name) {
    if (name == "cutout")
        return Recipe::cutout;
    if (name == "crop")
        return Recipe::crop;
    if (name == "overlay")
        return Recipe::overlay;
    if (name == "cartoon")
        return Recipe::cartoon;
    if (name == "sketch")
        return Recipe::sketch;
    if (name == "binarize")
        return Recipe::binarize;
    return std::nullopt;
}

bool recipe_needs_landmarks(Recipe r) {
    return r == Recipe::cutout;
}

GeneratedSample run_recipe(Recipe recipe, const ImageBuffer& img,
                           const LandmarkSet* lms, const RecipeParams& params,
                           DeterministicRng& rng) {
    switch (recipe) {
    case Recipe::cutout:
        if (!lms)
            throw ParameterError("cutout requires landmarks");
        return cutout_facial_regions(img, *lms, params.cutout, rng);
    case Recipe::crop:
        return local_crop_enlarge(img, params.crop, rng);
    case Recipe::overlay:
        return gray_translate_overlay(img, params.overlay, rng);
    case Recipe::cartoon:
        return cartoonize(img, params.cartoon, rng);
    case Recipe::sketch:
        return sketch(img, params.sketch, rng);
    case Recipe::binarize:
        return binarize_random(img, params.binarize, rng);
    }
    throw ParameterError("unknown recipe");
}

} // namespace forgery
