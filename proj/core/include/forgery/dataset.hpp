#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace forgery {

struct SourceEntry {
    std::string id; ///< path relative to the scanned root
    std::filesystem::path path;
    std::string label; ///< "real" or "fake"
    bool has_landmarks = false;
    std::filesystem::path landmark_path;
};

struct ScanReport {
    std::vector<std::string> undecodable;         ///< files that failed to decode
    std::vector<std::string> unlabeled;           ///< images missing a label row
    std::vector<std::string> labels_without_image; ///< label rows with no file
};

struct SourceIndex {
    std::vector<SourceEntry> entries; ///< sorted by id; decodable + labeled
    ScanReport report;

    /// Pointers into `entries` matching a label filter ("real", "fake",
    /// "any") and, optionally, landmark availability.
    std::vector<const SourceEntry*> pool(const std::string& source_filter,
                                         bool needs_landmarks) const;
};

/// Walk `root` recursively for .png/.jpg/.jpeg files, join with the labels
/// CSV (`image_id,label` header; labels are "real"/"fake"), and probe for
/// `<image>.landmarks` sidecars. Undecodable files and unlabeled images are
/// reported, not fatal; a missing labels file or duplicate ids are fatal.
SourceIndex scan_dataset(const std::filesystem::path& root,
                         const std::filesystem::path& labels_csv);

} // namespace forgery
