#include "forgery/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "forgery/errors.hpp"

namespace forgery {

namespace {

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

inline std::uint8_t round_u8(double v) {
    return clamp_u8(std::round(v));
}

inline int clamp_index(int v, int hi) {
    return std::clamp(v, 0, hi);
}

void require_odd_kernel(int kernel, const char* op_name) {
    if (kernel < 3 || kernel % 2 == 0)
        throw ParameterError(std::string(op_name) +
                             ": kernel must be odd and >= 3");
}

} // namespace

ImageBuffer to_grayscale(const ImageBuffer& img) {
    require_valid(img, "to_grayscale");
    if (img.channels == 1)
        return img;
    ImageBuffer out = ImageBuffer::create(img.width, img.height, 1);
    const std::uint8_t* src = img.data.data();
    std::uint8_t* dst = out.data.data();
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double luma = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                            0.114 * src[3 * i + 2];
        dst[i] = round_u8(luma);
    }
    return out;
}

ImageBuffer resize_bilinear(const ImageBuffer& img, int out_w, int out_h) {
    require_valid(img, "resize_bilinear");
    if (out_w <= 0 || out_h <= 0)
        throw ParameterError("resize_bilinear: output dims must be positive");
    if (out_w == img.width && out_h == img.height)
        return img;

    ImageBuffer out = ImageBuffer::create(out_w, out_h, img.channels);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    const int ch = img.channels;

    for (int oy = 0; oy < out_h; ++oy) {
        const double fy = (oy + 0.5) * sy - 0.5;
        const int y0 = clamp_index(static_cast<int>(std::floor(fy)), img.height - 1);
        const int y1 = clamp_index(y0 + 1, img.height - 1);
        const double wy = std::clamp(fy - y0, 0.0, 1.0);
        for (int ox = 0; ox < out_w; ++ox) {
            const double fx = (ox + 0.5) * sx - 0.5;
            const int x0 = clamp_index(static_cast<int>(std::floor(fx)), img.width - 1);
            const int x1 = clamp_index(x0 + 1, img.width - 1);
            const double wx = std::clamp(fx - x0, 0.0, 1.0);
            for (int c = 0; c < ch; ++c) {
                const double top = img.at(x0, y0, c) * (1.0 - wx) +
                                   img.at(x1, y0, c) * wx;
                const double bot = img.at(x0, y1, c) * (1.0 - wx) +
                                   img.at(x1, y1, c) * wx;
                out.at(ox, oy, c) = round_u8(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma, int kernel) {
    require_valid(img, "gaussian_blur");
    require_odd_kernel(kernel, "gaussian_blur");
    if (!(sigma > 0.0))
        throw ParameterError("gaussian_blur: sigma must be > 0");

    const int r = kernel / 2;
    std::vector<double> w(kernel);
    double total = 0.0;
    for (int i = 0; i < kernel; ++i) {
        const double d = i - r;
        w[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        total += w[i];
    }
    for (double& v : w)
        v /= total;

    const int ch = img.channels;
    const int width = img.width;
    const int height = img.height;

    // Horizontal pass into doubles, vertical pass with a single final rounding.
    std::vector<double> tmp(static_cast<std::size_t>(width) * height * ch);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i)
                    acc += w[i + r] * img.at(clamp_index(x + i, width - 1), y, c);
                tmp[(static_cast<std::size_t>(y) * width + x) * ch + c] = acc;
            }
        }
    }
    ImageBuffer out = ImageBuffer::create(width, height, ch);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    const int yy = clamp_index(y + i, height - 1);
                    acc += w[i + r] *
                           tmp[(static_cast<std::size_t>(yy) * width + x) * ch + c];
                }
                out.at(x, y, c) = round_u8(acc);
            }
        }
    }
    return out;
}

ImageBuffer median_filter(const ImageBuffer& img, int kernel) {
    require_valid(img, "median_filter");
    if (img.channels != 1)
        throw ParameterError("median_filter: grayscale input required");
    require_odd_kernel(kernel, "median_filter");

    const int r = kernel / 2;
    ImageBuffer out = ImageBuffer::create(img.width, img.height, 1);
    std::array<int, 256> hist{};
    const int window = kernel * kernel;
    const int mid = window / 2; // 0-based rank of the median
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            hist.fill(0);
            for (int j = -r; j <= r; ++j) {
                const int yy = clamp_index(y + j, img.height - 1);
                for (int i = -r; i <= r; ++i)
                    ++hist[img.at(clamp_index(x + i, img.width - 1), yy)];
            }
            int rank = 0;
            for (int v = 0; v < 256; ++v) {
                rank += hist[v];
                if (rank > mid) {
                    out.at(x, y) = static_cast<std::uint8_t>(v);
                    break;
                }
            }
        }
    }
    return out;
}

ImageBuffer adaptive_threshold(const ImageBuffer& img, int block, double c) {
    require_valid(img, "adaptive_threshold");
    if (img.channels != 1)
        throw ParameterError("adaptive_threshold: grayscale input required");
    require_odd_kernel(block, "adaptive_threshold");

    const int r = block / 2;
    const double inv_area = 1.0 / (static_cast<double>(block) * block);
    ImageBuffer out = ImageBuffer::create(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            long long sum = 0;
            for (int j = -r; j <= r; ++j) {
                const int yy = clamp_index(y + j, img.height - 1);
                for (int i = -r; i <= r; ++i)
                    sum += img.at(clamp_index(x + i, img.width - 1), yy);
            }
            const double mean = sum * inv_area;
            out.at(x, y) = img.at(x, y) > mean - c ? 255 : 0;
        }
    }
    return out;
}

KMeansResult kmeans_quantize(const ImageBuffer& img, int k, int max_iters,
                             DeterministicRng& rng) {
    require_valid(img, "kmeans_quantize");
    if (k <= 0)
        throw ParameterError("kmeans_quantize: k must be > 0");
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    if (static_cast<std::size_t>(k) > n)
        throw ParameterError("kmeans_quantize: k exceeds pixel count");
    if (max_iters < 1)
        throw ParameterError("kmeans_quantize: max_iters must be >= 1");

    const int ch = img.channels;
    const std::uint8_t* px = img.data.data();

    auto dist2_to = [&](std::size_t i, const double* cen) {
        double d2 = 0.0;
        for (int c = 0; c < ch; ++c) {
            const double d = px[i * ch + c] - cen[c];
            d2 += d * d;
        }
        return d2;
    };

    // k-means++ seeding. If every remaining distance is zero the image has
    // fewer distinct colors than k and seeding stops early.
    std::vector<double> centroids; // k' * ch
    std::vector<double> best_d2(n);
    {
        const std::size_t first = rng.uniform_u64(n);
        for (int c = 0; c < ch; ++c)
            centroids.push_back(px[first * ch + c]);
        for (std::size_t i = 0; i < n; ++i)
            best_d2[i] = dist2_to(i, centroids.data());
        while (centroids.size() < static_cast<std::size_t>(k) * ch) {
            double total = std::accumulate(best_d2.begin(), best_d2.end(), 0.0);
            if (total <= 0.0)
                break;
            double target = rng.uniform_double() * total;
            std::size_t chosen = n - 1;
            double run = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                run += best_d2[i];
                if (run > target) {
                    chosen = i;
                    break;
                }
            }
            const std::size_t base = centroids.size();
            for (int c = 0; c < ch; ++c)
                centroids.push_back(px[chosen * ch + c]);
            for (std::size_t i = 0; i < n; ++i)
                best_d2[i] = std::min(best_d2[i], dist2_to(i, &centroids[base]));
        }
    }
    const int kk = static_cast<int>(centroids.size()) / ch;

    std::vector<int> assign(n, -1);
    auto nearest = [&](std::size_t i) {
        int best = 0;
        double best_d = dist2_to(i, &centroids[0]);
        for (int j = 1; j < kk; ++j) {
            const double d = dist2_to(i, &centroids[static_cast<std::size_t>(j) * ch]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        return std::pair<int, double>(best, best_d);
    };

    KMeansResult result;
    std::vector<double> sums(static_cast<std::size_t>(kk) * ch);
    std::vector<std::size_t> counts(kk);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        double sse = 0.0;
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto [j, d] = nearest(i);
            sse += d;
            if (assign[i] != j) {
                assign[i] = j;
                changed = true;
            }
            ++counts[j];
            for (int c = 0; c < ch; ++c)
                sums[static_cast<std::size_t>(j) * ch + c] += px[i * ch + c];
        }
        result.sse_history.push_back(sse);
        result.iterations = iter + 1;
        if (!changed)
            break;
        for (int j = 0; j < kk; ++j) {
            if (counts[j] == 0)
                continue; // empty cluster keeps its centroid
            for (int c = 0; c < ch; ++c)
                centroids[static_cast<std::size_t>(j) * ch + c] =
                    sums[static_cast<std::size_t>(j) * ch + c] / counts[j];
        }
    }

    result.palette.resize(static_cast<std::size_t>(kk) * ch);
    for (std::size_t i = 0; i < result.palette.size(); ++i)
        result.palette[i] = round_u8(centroids[i]);

    result.image = ImageBuffer::create(img.width, img.height, ch);
    for (std::size_t i = 0; i < n; ++i) {
        const int j = nearest(i).first;
        for (int c = 0; c < ch; ++c)
            result.image.data[i * ch + c] =
                result.palette[static_cast<std::size_t>(j) * ch + c];
    }
    return result;
}

ImageBuffer translate(const ImageBuffer& img, int dx, int dy) {
    require_valid(img, "translate");
    ImageBuffer out = ImageBuffer::create(img.width, img.height, img.channels);
    const int ch = img.channels;
    for (int y = 0; y < img.height; ++y) {
        const int sy = y - dy;
        if (sy < 0 || sy >= img.height)
            continue;
        const int x_begin = std::max(0, dx);
        const int x_end = std::min(img.width, img.width + dx);
        if (x_begin >= x_end)
            continue;
        std::memcpy(out.data.data() +
                        (static_cast<std::size_t>(y) * img.width + x_begin) * ch,
                    img.data.data() +
                        (static_cast<std::size_t>(sy) * img.width +
                         (x_begin - dx)) * ch,
                    static_cast<std::size_t>(x_end - x_begin) * ch);
    }
    return out;
}

ImageBuffer invert(const ImageBuffer& img) {
    require_valid(img, "invert");
    ImageBuffer out = img;
    for (std::uint8_t& v : out.data)
        v = static_cast<std::uint8_t>(255 - v);
    return out;
}

ImageBuffer adjust_contrast(const ImageBuffer& img, double factor) {
    require_valid(img, "adjust_contrast");
    if (!(factor >= 0.0))
        throw ParameterError("adjust_contrast: factor must be >= 0");
    const ImageBuffer gray = to_grayscale(img);
    double mean = 0.0;
    for (std::uint8_t v : gray.data)
        mean += v;
    mean /= static_cast<double>(gray.data.size());

    ImageBuffer out = ImageBuffer::create(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = round_u8(mean + factor * (img.data[i] - mean));
    return out;
}

ImageBuffer rotate(const ImageBuffer& img, double degrees) {
    require_valid(img, "rotate");
    const double rad = degrees * (M_PI / 180.0);
    const double cs = std::cos(rad);
    const double sn = std::sin(rad);
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    const int ch = img.channels;

    ImageBuffer out = ImageBuffer::create(img.width, img.height, ch);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // Inverse mapping: rotate the destination coordinate back.
            const double rx = x - cx;
            const double ry = y - cy;
            const double sx = cs * rx + sn * ry + cx;
            const double sy = -sn * rx + cs * ry + cy;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double wx = sx - x0;
            const double wy = sy - y0;
            for (int c = 0; c < ch; ++c) {
                auto sample = [&](int xx, int yy) -> double {
                    if (xx < 0 || xx >= img.width || yy < 0 || yy >= img.height)
                        return 0.0;
                    return img.at(xx, yy, c);
                };
                const double top = sample(x0, y0) * (1.0 - wx) +
                                   sample(x0 + 1, y0) * wx;
                const double bot = sample(x0, y0 + 1) * (1.0 - wx) +
                                   sample(x0 + 1, y0 + 1) * wx;
                out.at(x, y, c) = round_u8(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return out;
}

ImageBuffer hflip(const ImageBuffer& img) {
    require_valid(img, "hflip");
    ImageBuffer out = ImageBuffer::create(img.width, img.height, img.channels);
    const int ch = img.channels;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < ch; ++c)
                out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
    return out;
}

} // namespace forgery
