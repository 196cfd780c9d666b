#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace forgery {

/// One generated (or skipped) item. Records sort by (entry, item, attempt).
struct ManifestRecord {
    int entry_index = 0;
    long item_index = 0;
    int attempt = 0;
    std::string recipe;
    std::string source_id;
    std::string label;
    std::uint64_t seed = 0;
    std::string output; ///< path relative to the run dir; empty for skips
    std::string digest; ///< sha256 of the output bytes; empty for skips
    bool skipped = false;
    std::string skip_reason;
    bool source_reused = false; ///< source already drawn earlier in this entry
    nlohmann::json params;
};

struct RunManifest {
    std::string tool_version;
    std::string plan_digest;
    std::uint64_t master_seed = 0;
    nlohmann::json config; ///< effective per-entry configuration echo
    std::vector<ManifestRecord> records;
};

/// JSON-lines serialization: one header object, then one object per record.
std::string format_manifest(const RunManifest& manifest);

/// Written atomically (temp file + rename) so readers never see a partial
/// manifest.
void write_manifest(const std::filesystem::path& path,
                    const RunManifest& manifest);

RunManifest read_manifest(const std::filesystem::path& path);

/// Cross-check a manifest against its run directory: every non-skip record's
/// output must exist with a matching digest, and every file in the directory
/// (manifest aside) must appear in the manifest. Returns human-readable
/// problems; empty means consistent.
std::vector<std::string> verify_manifest(const RunManifest& manifest,
                                         const std::filesystem::path& run_dir);

inline constexpr const char* kManifestFilename = "manifest.jsonl";

} // namespace forgery
