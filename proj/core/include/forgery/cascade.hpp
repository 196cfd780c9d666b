#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "forgery/image.hpp"

namespace forgery {

/// 2-3 weighted rectangles inside the base window; exactly one carries a
/// negative weight (the enclosing frame).
struct HaarFeature {
    struct WeightedRect {
        Rect rect;
        double weight = 0.0;
    };
    std::vector<WeightedRect> rects;
};

/// Decision stump: feature value vs threshold * window-area * window-stddev.
struct WeakClassifier {
    int feature_index = 0;
    double threshold = 0.0;
    double leaf_below = 0.0; ///< vote when value < threshold
    double leaf_above = 0.0; ///< vote when value >= threshold
};

struct CascadeStage {
    double threshold = 0.0;
    std::vector<WeakClassifier> weak;
};

/// Parsed BOOST/HAAR cascade in the stump-based (internalNodes/leafValues)
/// serialization. Immutable after parse; shareable across threads.
struct CascadeModel {
    int window_w = 0;
    int window_h = 0;
    std::vector<CascadeStage> stages;
    std::vector<HaarFeature> features;
};

/// Parse the standard cascade classifier XML serialization.
///   - malformed XML, missing nodes, bad numbers -> ParseError
///   - LBP/HOG features, tree (non-stump) classifiers, categorical
///     features, tilted features -> UnsupportedError
///   - out-of-window rects, bad feature indices, weight-convention
///     violations -> ValidationError
CascadeModel parse_cascade(std::string_view xml_text);

CascadeModel load_cascade(const std::filesystem::path& path);

} // namespace forgery
