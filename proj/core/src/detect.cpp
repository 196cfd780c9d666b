#include "forgery/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "forgery/errors.hpp"
#include "forgery/imaging.hpp"

namespace forgery {

namespace {

struct ScaledFeature {
    struct R {
        Rect rect;
        double weight;
    };
    std::vector<R> rects;
};

struct ScaledCascade {
    int window_w = 0;
    int window_h = 0;
    std::vector<ScaledFeature> features;
};

// Scale rects to nearest-integer coordinates, then recompute the (unique)
// negative weight so the feature stays DC-free despite rounding.
ScaledCascade build_scaled(const CascadeModel& model, double scale) {
    ScaledCascade out;
    out.window_w = static_cast<int>(std::lround(model.window_w * scale));
    out.window_h = static_cast<int>(std::lround(model.window_h * scale));
    out.features.reserve(model.features.size());
    for (const HaarFeature& feature : model.features) {
        ScaledFeature sf;
        int negative = -1;
        for (const auto& wr : feature.rects) {
            ScaledFeature::R r;
            r.rect = Rect{static_cast<int>(std::lround(wr.rect.x * scale)),
                          static_cast<int>(std::lround(wr.rect.y * scale)),
                          static_cast<int>(std::lround(wr.rect.w * scale)),
                          static_cast<int>(std::lround(wr.rect.h * scale))};
            r.weight = wr.weight;
            if (wr.weight < 0.0)
                negative = static_cast<int>(sf.rects.size());
            sf.rects.push_back(r);
        }
        if (negative >= 0) {
            double positive_mass = 0.0;
            for (std::size_t i = 0; i < sf.rects.size(); ++i)
                if (static_cast<int>(i) != negative)
                    positive_mass += sf.rects[i].weight *
                                     static_cast<double>(sf.rects[i].rect.area());
            const double neg_area =
                static_cast<double>(sf.rects[negative].rect.area());
            sf.rects[negative].weight =
                neg_area > 0.0 ? -positive_mass / neg_area : 0.0;
        }
        out.features.push_back(std::move(sf));
    }
    return out;
}

bool eval_scaled(const CascadeModel& model, const ScaledCascade& scaled,
                 const IntegralPair& ints, int x, int y) {
    const int w = scaled.window_w;
    const int h = scaled.window_h;
    const double area = static_cast<double>(w) * h;
    const Rect window{x, y, w, h};
    const double sum = static_cast<double>(ints.rect_sum(window));
    const double sq = static_cast<double>(ints.rect_sq_sum(window));
    const double mean = sum / area;
    const double variance = sq / area - mean * mean;
    const double stddev = variance > 0.0 ? std::sqrt(variance) : 1.0;

    for (const CascadeStage& stage : model.stages) {
        double votes = 0.0;
        for (const WeakClassifier& weak : stage.weak) {
            const ScaledFeature& feature = scaled.features[weak.feature_index];
            double value = 0.0;
            for (const auto& r : feature.rects) {
                const Rect shifted{x + r.rect.x, y + r.rect.y, r.rect.w,
                                   r.rect.h};
                value += r.weight * static_cast<double>(ints.rect_sum(shifted));
            }
            votes += value >= weak.threshold * area * stddev ? weak.leaf_above
                                                             : weak.leaf_below;
        }
        if (votes < stage.threshold)
            return false;
    }
    return true;
}

} // namespace

bool eval_window(const CascadeModel& model, const IntegralPair& ints, int x,
                 int y, double scale) {
    if (!(scale > 0.0))
        throw ParameterError("eval_window: scale must be > 0");
    const ScaledCascade scaled = build_scaled(model, scale);
    if (x < 0 || y < 0 || x + scaled.window_w > ints.width ||
        y + scaled.window_h > ints.height)
        throw ParameterError("eval_window: window out of bounds");
    return eval_scaled(model, scaled, ints, x, y);
}

std::vector<Detection> group_hits(const std::vector<Rect>& hits,
                                  int min_neighbors) {
    std::vector<Detection> out;
    if (min_neighbors <= 0) {
        out.reserve(hits.size());
        for (const Rect& hit : hits)
            out.push_back({hit, 1});
        return out;
    }

    std::vector<int> parent(hits.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    auto overlap = [](const Rect& a, const Rect& b) {
        const long long inter = a.intersect(b).area();
        return inter * 2 >= std::max(a.area(), b.area());
    };
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j)
            if (overlap(hits[i], hits[j]))
                parent[find(static_cast<int>(j))] = find(static_cast<int>(i));

    struct Group {
        long long sx = 0, sy = 0, sw = 0, sh = 0;
        int count = 0;
    };
    std::vector<Group> groups(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        Group& g = groups[find(static_cast<int>(i))];
        g.sx += hits[i].x;
        g.sy += hits[i].y;
        g.sw += hits[i].w;
        g.sh += hits[i].h;
        ++g.count;
    }
    for (const Group& g : groups) {
        if (g.count < min_neighbors || g.count == 0)
            continue;
        const auto avg = [&](long long v) {
            return static_cast<int>(
                std::lround(static_cast<double>(v) / g.count));
        };
        out.push_back({Rect{avg(g.sx), avg(g.sy), avg(g.sw), avg(g.sh)},
                       g.count});
    }
    std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
        return std::tie(a.box.y, a.box.x, a.box.w, a.neighbors) <
               std::tie(b.box.y, b.box.x, b.box.w, b.neighbors);
    });
    return out;
}

std::vector<Detection> detect_multiscale(const CascadeModel& model,
                                         const ImageBuffer& img,
                                         const DetectParams& params) {
    if (!(params.scale_factor > 1.0))
        throw ParameterError("detect_multiscale: scale_factor must be > 1");
    require_valid(img, "detect_multiscale");

    const ImageBuffer gray = img.channels == 1 ? img : to_grayscale(img);
    const IntegralPair ints = integral_images(gray);

    std::vector<Rect> hits;
    for (double scale = 1.0;; scale *= params.scale_factor) {
        const ScaledCascade scaled = build_scaled(model, scale);
        if (scaled.window_w > gray.width || scaled.window_h > gray.height)
            break;
        if (scaled.window_w < params.min_size ||
            scaled.window_h < params.min_size)
            continue;
        const int step = std::max(1, static_cast<int>(std::lround(scale)));
        for (int y = 0; y + scaled.window_h <= gray.height; y += step)
            for (int x = 0; x + scaled.window_w <= gray.width; x += step)
                if (eval_scaled(model, scaled, ints, x, y))
                    hits.push_back(Rect{x, y, scaled.window_w, scaled.window_h});
    }

    std::sort(hits.begin(), hits.end(), [](const Rect& a, const Rect& b) {
        return std::tie(a.y, a.x, a.w, a.h) < std::tie(b.y, b.x, b.w, b.h);
    });
    return group_hits(hits, params.min_neighbors);
}

} // namespace forgery
