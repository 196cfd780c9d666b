#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "forgery/image.hpp"

namespace forgery {

inline constexpr int kLandmarkCount = 68;

/// 68-point facial annotation for one image. Coordinates may fall outside
/// the image (detectors extrapolate); region boxes clamp at use time.
struct LandmarkSet {
    std::array<std::array<double, 2>, kLandmarkCount> points{};
    std::string image_ref;

    double x(int i) const { return points[i][0]; }
    double y(int i) const { return points[i][1]; }
};

/// Named landmark index subset. The default table follows the standard
/// 68-point annotation: eyebrows 17-26, nose 27-35, eyes 36-47, lips 48-67;
/// jaw points 0-16 belong to no region.
struct FacialRegion {
    std::string name;
    std::vector<int> indices;
};

/// The six regions the cutout recipe may erase. Validated on construction:
/// pairwise disjoint, all indices in 17..67.
const std::vector<FacialRegion>& default_regions();

/// Load an alternate region table: one region per line,
/// `name: i0 i1 i2 ...`. Same validation as the default table.
std::vector<FacialRegion> load_regions(const std::filesystem::path& path);

/// Throws ValidationError unless regions are pairwise disjoint with indices
/// in [17, 67].
void validate_regions(const std::vector<FacialRegion>& regions);

/// Parse one sidecar record: `<image-name> x0 y0 ... x67 y67`.
/// Wrong token count -> ValidationError; non-numeric -> ParseError.
LandmarkSet parse_landmark_record(std::string_view line);

/// Load a single-record sidecar file.
LandmarkSet load_landmarks(const std::filesystem::path& path);

/// Serialize with shortest round-trip formatting so that
/// load(save(lms)) == lms bit-for-bit.
std::string format_landmark_record(const LandmarkSet& lms);
void save_landmarks(const std::filesystem::path& path, const LandmarkSet& lms);

/// Load every record of every *.landmarks file under dir (non-recursive),
/// keyed by the record's image name.
std::map<std::string, LandmarkSet>
load_landmark_dir(const std::filesystem::path& dir);

/// Axis-aligned box of the region's points, expanded by pad on all sides and
/// clamped to the image. Throws ValidationError if the clamped box has zero
/// area (degenerate region or region entirely outside the image).
Rect region_bbox(const LandmarkSet& lms, const FacialRegion& region, int pad,
                 int img_w, int img_h);

/// Mean of the 68 points.
std::array<double, 2> landmark_centroid(const LandmarkSet& lms);

} // namespace forgery
