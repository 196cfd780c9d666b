#include "forgery/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "forgery/codec.hpp"
#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

struct Color {
    std::uint8_t r, g, b;
};

void fill_ellipse(ImageBuffer& img, double cx, double cy, double rx, double ry,
                  Color color) {
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + ry)));
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + rx)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = (x - cx) / rx;
            const double dy = (y - cy) / ry;
            if (dx * dx + dy * dy <= 1.0) {
                img.at(x, y, 0) = color.r;
                img.at(x, y, 1) = color.g;
                img.at(x, y, 2) = color.b;
            }
        }
    }
}

void fill_box(ImageBuffer& img, const Rect& box, Color color) {
    const Rect r = box.clamped(img.width, img.height);
    for (int y = r.y; y < r.bottom(); ++y)
        for (int x = r.x; x < r.right(); ++x) {
            img.at(x, y, 0) = color.r;
            img.at(x, y, 1) = color.g;
            img.at(x, y, 2) = color.b;
        }
}

} // namespace

SynthFace synth_face(int width, int height, DeterministicRng& rng) {
    if (width < 32 || height < 32)
        throw ParameterError("synth_face: image must be at least 32x32");

    SynthFace face;
    face.image = ImageBuffer::create(width, height, 3);

    // Smooth two-color gradient background (compresses well as PNG).
    const Color bg_top{static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256))};
    const Color bg_bot{static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256))};
    for (int y = 0; y < height; ++y) {
        const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0;
        const Color row{
            static_cast<std::uint8_t>(std::lround(bg_top.r + t * (bg_bot.r - bg_top.r))),
            static_cast<std::uint8_t>(std::lround(bg_top.g + t * (bg_bot.g - bg_top.g))),
            static_cast<std::uint8_t>(std::lround(bg_top.b + t * (bg_bot.b - bg_top.b)))};
        for (int x = 0; x < width; ++x) {
            face.image.at(x, y, 0) = row.r;
            face.image.at(x, y, 1) = row.g;
            face.image.at(x, y, 2) = row.b;
        }
    }

    // A couple of clutter rectangles.
    const int clutter = static_cast<int>(rng.uniform_u32(3));
    for (int i = 0; i < clutter; ++i) {
        const Rect box{static_cast<int>(rng.uniform_u32(width)),
                       static_cast<int>(rng.uniform_u32(height)),
                       static_cast<int>(rng.uniform_u32(width / 4) + 4),
                       static_cast<int>(rng.uniform_u32(height / 4) + 4)};
        fill_box(face.image, box,
                 Color{static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256)),
                       static_cast<std::uint8_t>(rng.uniform_u32(256))});
    }

    // Face placement: center jitter and a scale that keeps landmarks inside.
    const double span = 0.5 * std::min(width, height);
    const double scale = span * rng.uniform_real(0.55, 0.8);
    const double fx = width / 2.0 + rng.uniform_real(-0.08, 0.08) * width;
    const double fy = height / 2.0 + rng.uniform_real(-0.08, 0.08) * height;

    const std::uint8_t skin_base = static_cast<std::uint8_t>(
        static_cast<int>(rng.uniform_u32(80)) + 150);
    const Color skin{skin_base, static_cast<std::uint8_t>(skin_base * 0.82),
                     static_cast<std::uint8_t>(skin_base * 0.66)};
    const Color dark{40, 30, 30};
    const Color mouth{150, 60, 60};

    fill_ellipse(face.image, fx, fy, scale * 0.95, scale * 1.05, skin);

    auto to_px = [&](double ux, double uy) -> std::array<double, 2> {
        return {fx + ux * scale, fy + uy * scale};
    };

    // Features: eyes, brows, nose, mouth.
    const auto eye_l = to_px(-0.40, -0.32);
    const auto eye_r = to_px(0.40, -0.32);
    const double eye_rx = 0.15 * scale;
    const double eye_ry = 0.07 * scale;
    fill_ellipse(face.image, eye_l[0], eye_l[1], eye_rx, eye_ry, Color{230, 230, 230});
    fill_ellipse(face.image, eye_r[0], eye_r[1], eye_rx, eye_ry, Color{230, 230, 230});
    fill_ellipse(face.image, eye_l[0], eye_l[1], eye_rx * 0.45, eye_ry * 0.9, dark);
    fill_ellipse(face.image, eye_r[0], eye_r[1], eye_rx * 0.45, eye_ry * 0.9, dark);

    const auto brow_l = to_px(-0.40, -0.52);
    const auto brow_r = to_px(0.40, -0.52);
    fill_box(face.image,
             Rect{static_cast<int>(brow_l[0] - 0.22 * scale),
                  static_cast<int>(brow_l[1] - 0.035 * scale),
                  static_cast<int>(0.44 * scale),
                  std::max(1, static_cast<int>(0.07 * scale))},
             dark);
    fill_box(face.image,
             Rect{static_cast<int>(brow_r[0] - 0.22 * scale),
                  static_cast<int>(brow_r[1] - 0.035 * scale),
                  static_cast<int>(0.44 * scale),
                  std::max(1, static_cast<int>(0.07 * scale))},
             dark);

    fill_box(face.image,
             Rect{static_cast<int>(fx - 0.03 * scale),
                  static_cast<int>(fy - 0.38 * scale),
                  std::max(1, static_cast<int>(0.06 * scale)),
                  static_cast<int>(0.48 * scale)},
             Color{static_cast<std::uint8_t>(skin.r * 0.85),
                   static_cast<std::uint8_t>(skin.g * 0.85),
                   static_cast<std::uint8_t>(skin.b * 0.85)});

    const auto mouth_c = to_px(0.0, 0.45);
    fill_ellipse(face.image, mouth_c[0], mouth_c[1], 0.28 * scale, 0.12 * scale,
                 mouth);

    // 68-point template in face space (x right, y down), standard ordering:
    // jaw 0-16, brows 17-26, nose 27-35, eyes 36-47, lips 48-67.
    auto& pts = face.landmarks.points;
    for (int i = 0; i <= 16; ++i) {
        const double t = static_cast<double>(i) / 16.0;
        const double ang = std::numbers::pi * t;
        pts[i] = to_px(-std::cos(ang) * 0.92, 0.12 + 0.88 * std::sin(ang));
    }
    for (int i = 0; i < 5; ++i) {
        const double t = static_cast<double>(i) / 4.0;
        const double arc = -0.06 * std::sin(std::numbers::pi * t);
        pts[17 + i] = to_px(-0.62 + 0.44 * t, -0.52 + arc);
        pts[22 + i] = to_px(0.18 + 0.44 * t, -0.52 + arc);
    }
    for (int i = 0; i < 4; ++i)
        pts[27 + i] = to_px(0.0, -0.38 + 0.13 * i);
    for (int i = 0; i < 5; ++i)
        pts[31 + i] = to_px(-0.16 + 0.08 * i, 0.08 - 0.03 * std::sin(std::numbers::pi * i / 4.0));
    const double eye_pts[6][2] = {{-1.0, 0.0}, {-0.5, -0.8}, {0.5, -0.8},
                                  {1.0, 0.0},  {0.5, 0.8},   {-0.5, 0.8}};
    for (int i = 0; i < 6; ++i) {
        pts[36 + i] = to_px(-0.40 + 0.14 * eye_pts[i][0],
                            -0.32 + 0.06 * eye_pts[i][1]);
        pts[42 + i] = to_px(0.40 + 0.14 * eye_pts[i][0],
                            -0.32 + 0.06 * eye_pts[i][1]);
    }
    for (int i = 0; i < 12; ++i) {
        const double ang = 2.0 * std::numbers::pi * i / 12.0;
        pts[48 + i] = to_px(-0.26 * std::cos(ang), 0.45 + 0.11 * std::sin(ang));
    }
    for (int i = 0; i < 8; ++i) {
        const double ang = 2.0 * std::numbers::pi * i / 8.0;
        pts[60 + i] = to_px(-0.16 * std::cos(ang), 0.45 + 0.045 * std::sin(ang));
    }
    return face;
}

void synth_corpus(const std::filesystem::path& out_dir,
                  const SynthOptions& options) {
    if (options.count < 0)
        throw ParameterError("synth_corpus: count must be >= 0");
    std::filesystem::create_directories(out_dir);

    std::string labels = "image_id,label\n";
    for (long i = 0; i < options.count; ++i) {
        DeterministicRng rng(options.seed, static_cast<std::uint64_t>(i));
        SynthFace face = synth_face(options.width, options.height, rng);

        char name[64];
        std::snprintf(name, sizeof(name), "img_%06ld.png", i);
        save_image(out_dir / name, face.image);

        const bool fake = rng.bernoulli(options.fake_fraction);
        labels += std::string(name) + "," + (fake ? "fake" : "real") + "\n";

        if (rng.uniform_double() < options.landmark_coverage) {
            face.landmarks.image_ref = name;
            std::filesystem::path sidecar = out_dir / name;
            sidecar.replace_extension(".landmarks");
            save_landmarks(sidecar, face.landmarks);
        }
    }
    write_text_file(out_dir / "labels.csv", labels);
}

} // namespace forgery
