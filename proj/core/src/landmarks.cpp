#include "forgery/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

std::vector<FacialRegion> build_default_regions() {
    std::vector<FacialRegion> regions;
    auto add = [&](const char* name, int lo, int hi) {
        FacialRegion r;
        r.name = name;
        r.indices.resize(hi - lo + 1);
        std::iota(r.indices.begin(), r.indices.end(), lo);
        regions.push_back(std::move(r));
    };
    add("left_eyebrow", 17, 21);
    add("right_eyebrow", 22, 26);
    add("nose", 27, 35);
    add("left_eye", 36, 41);
    add("right_eye", 42, 47);
    add("lips", 48, 67);
    validate_regions(regions);
    return regions;
}

} // namespace

const std::vector<FacialRegion>& default_regions() {
    static const std::vector<FacialRegion> regions = build_default_regions();
    return regions;
}

void validate_regions(const std::vector<FacialRegion>& regions) {
    std::set<int> seen;
    for (const FacialRegion& r : regions) {
        if (r.indices.empty())
            throw ValidationError("region '" + r.name + "' has no indices");
        for (int i : r.indices) {
            if (i < 17 || i >= kLandmarkCount)
                throw ValidationError("region '" + r.name + "' index " +
                                      std::to_string(i) +
                                      " outside 17..67 (jaw points are never cut)");
            if (!seen.insert(i).second)
                throw ValidationError("region index " + std::to_string(i) +
                                      " appears in more than one region");
        }
    }
}

std::vector<FacialRegion> load_regions(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    std::vector<FacialRegion> regions;
    for (std::string_view line : split_char(content, '\n')) {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw ParseError(path.string() + ": region line missing ':': " +
                             std::string(line));
        FacialRegion region;
        region.name = std::string(trim(line.substr(0, colon)));
        for (std::string_view tok : split_whitespace(line.substr(colon + 1))) {
            const auto idx = parse_int(tok);
            if (!idx)
                throw ParseError(path.string() + ": bad region index '" +
                                 std::string(tok) + "'");
            region.indices.push_back(static_cast<int>(*idx));
        }
        regions.push_back(std::move(region));
    }
    validate_regions(regions);
    return regions;
}

LandmarkSet parse_landmark_record(std::string_view line) {
    const auto tokens = split_whitespace(line);
    if (tokens.empty())
        throw ParseError("landmark record: empty line");
    if (tokens.size() != 1 + 2 * kLandmarkCount)
        throw ValidationError(
            "landmark record for '" + std::string(tokens[0]) + "': expected " +
            std::to_string(2 * kLandmarkCount) + " coordinates (68 points), got " +
            std::to_string(tokens.size() - 1));
    LandmarkSet lms;
    lms.image_ref = std::string(tokens[0]);
    for (int i = 0; i < kLandmarkCount; ++i) {
        const auto px = parse_double(tokens[1 + 2 * i]);
        const auto py = parse_double(tokens[2 + 2 * i]);
        if (!px || !py)
            throw ParseError("landmark record for '" + lms.image_ref +
                             "': non-numeric coordinate at point " +
                             std::to_string(i));
        if (!std::isfinite(*px) || !std::isfinite(*py))
            throw ValidationError("landmark record for '" + lms.image_ref +
                                  "': non-finite coordinate at point " +
                                  std::to_string(i));
        lms.points[i] = {*px, *py};
    }
    return lms;
}

LandmarkSet load_landmarks(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw IoError("landmark file missing: " + path.string());
    const std::string content = read_text_file(path);
    std::optional<LandmarkSet> record;
    for (std::string_view line : split_char(content, '\n')) {
        if (trim(line).empty())
            continue;
        if (record)
            throw ValidationError(path.string() +
                                  ": expected a single landmark record");
        try {
            record = parse_landmark_record(line);
        } catch (const ValidationError& e) {
            throw ValidationError(path.string() + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    if (!record)
        throw ParseError(path.string() + ": no landmark record found");
    return *record;
}

std::string format_landmark_record(const LandmarkSet& lms) {
    std::string out = lms.image_ref;
    for (int i = 0; i < kLandmarkCount; ++i) {
        out += ' ';
        out += format_double(lms.x(i));
        out += ' ';
        out += format_double(lms.y(i));
    }
    return out;
}

void save_landmarks(const std::filesystem::path& path, const LandmarkSet& lms) {
    write_text_file(path, format_landmark_record(lms) + "\n");
}

std::map<std::string, LandmarkSet>
load_landmark_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("landmark directory missing: " + dir.string());
    std::map<std::string, LandmarkSet> out;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".landmarks")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        const std::string content = read_text_file(file);
        for (std::string_view line : split_char(content, '\n')) {
            if (trim(line).empty())
                continue;
            LandmarkSet lms = parse_landmark_record(line);
            if (!out.emplace(lms.image_ref, lms).second)
                throw ValidationError(file.string() +
                                      ": duplicate landmark record for '" +
                                      lms.image_ref + "'");
        }
    }
    return out;
}

Rect region_bbox(const LandmarkSet& lms, const FacialRegion& region, int pad,
                 int img_w, int img_h) {
    if (region.indices.empty())
        throw ParameterError("region_bbox: empty region");
    if (pad < 0)
        throw ParameterError("region_bbox: pad must be >= 0");
    double min_x = lms.x(region.indices[0]);
    double max_x = min_x;
    double min_y = lms.y(region.indices[0]);
    double max_y = min_y;
    for (int i : region.indices) {
        min_x = std::min(min_x, lms.x(i));
        max_x = std::max(max_x, lms.x(i));
        min_y = std::min(min_y, lms.y(i));
        max_y = std::max(max_y, lms.y(i));
    }
    const int x0 = static_cast<int>(std::floor(min_x - pad));
    const int y0 = static_cast<int>(std::floor(min_y - pad));
    const int x1 = static_cast<int>(std::ceil(max_x + pad));
    const int y1 = static_cast<int>(std::ceil(max_y + pad));
    const Rect box = Rect{x0, y0, x1 - x0, y1 - y0}.clamped(img_w, img_h);
    if (box.empty())
        throw ValidationError("region_bbox: region '" + region.name +
                              "' is degenerate or outside the image");
    return box;
}

std::array<double, 2> landmark_centroid(const LandmarkSet& lms) {
    double sx = 0.0;
    double sy = 0.0;
    for (int i = 0; i < kLandmarkCount; ++i) {
        sx += lms.x(i);
        sy += lms.y(i);
    }
    return {sx / kLandmarkCount, sy / kLandmarkCount};
}

} // namespace forgery
