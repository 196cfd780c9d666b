#pragma once

#include <vector>

#include "forgery/cascade.hpp"
#include "forgery/image.hpp"
#include "forgery/integral.hpp"

namespace forgery {

struct Detection {
    Rect box;
    int neighbors = 0;

    bool operator==(const Detection&) const = default;
};

struct DetectParams {
    double scale_factor = 1.1;
    int min_neighbors = 3;
    int min_size = 30;
};

/// Evaluate one window at the given origin with features scaled by `scale`
/// (window size = round(base * scale)). Window mean/stddev come from the
/// integral pair; a stage rejects as soon as its vote sum falls below the
/// stage threshold. Flat windows (variance <= 0) use stddev 1.
bool eval_window(const CascadeModel& model, const IntegralPair& ints, int x,
                 int y, double scale);

/// Union-find grouping of raw window hits: two boxes join when their
/// intersection covers at least half of each box's area. Groups become one
/// Detection with the member-mean box and neighbors = group size; groups
/// smaller than min_neighbors are dropped. min_neighbors <= 0 returns every
/// raw hit with neighbors = 1.
std::vector<Detection> group_hits(const std::vector<Rect>& hits,
                                  int min_neighbors);

/// Multi-scale sliding-window detection. The feature pyramid scales by
/// scale_factor per level with slide step max(1, round(scale)); windows
/// smaller than min_size are skipped. Images smaller than the base window
/// yield an empty result. Fully deterministic.
std::vector<Detection> detect_multiscale(const CascadeModel& model,
                                         const ImageBuffer& img,
                                         const DetectParams& params = {});

} // namespace forgery
