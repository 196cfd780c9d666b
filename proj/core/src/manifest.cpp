#include "forgery/manifest.hpp"

#include <algorithm>
#include <set>

#include "forgery/digest.hpp"
#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

nlohmann::json record_to_json(const ManifestRecord& rec) {
    nlohmann::json j = {{"type", rec.skipped ? "skip" : "sample"},
                        {"entry", rec.entry_index},
                        {"item", rec.item_index},
                        {"attempt", rec.attempt},
                        {"recipe", rec.recipe},
                        {"source_id", rec.source_id},
                        {"seed", rec.seed}};
    if (rec.skipped) {
        j["reason"] = rec.skip_reason;
    } else {
        j["label"] = rec.label;
        j["output"] = rec.output;
        j["digest"] = rec.digest;
        j["source_reused"] = rec.source_reused;
        j["params"] = rec.params;
    }
    return j;
}

ManifestRecord record_from_json(const nlohmann::json& j) {
    ManifestRecord rec;
    rec.skipped = j.at("type").get<std::string>() == "skip";
    rec.entry_index = j.at("entry").get<int>();
    rec.item_index = j.at("item").get<long>();
    rec.attempt = j.at("attempt").get<int>();
    rec.recipe = j.at("recipe").get<std::string>();
    rec.source_id = j.at("source_id").get<std::string>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    if (rec.skipped) {
        rec.skip_reason = j.at("reason").get<std::string>();
    } else {
        rec.label = j.at("label").get<std::string>();
        rec.output = j.at("output").get<std::string>();
        rec.digest = j.at("digest").get<std::string>();
        rec.source_reused = j.at("source_reused").get<bool>();
        rec.params = j.at("params");
    }
    return rec;
}

} // namespace

std::string format_manifest(const RunManifest& manifest) {
    nlohmann::json header = {{"type", "header"},
                             {"tool_version", manifest.tool_version},
                             {"plan_digest", manifest.plan_digest},
                             {"master_seed", manifest.master_seed},
                             {"config", manifest.config}};
    std::string out = header.dump() + "\n";
    for (const ManifestRecord& rec : manifest.records)
        out += record_to_json(rec).dump() + "\n";
    return out;
}

void write_manifest(const std::filesystem::path& path,
                    const RunManifest& manifest) {
    write_text_file_atomic(path, format_manifest(manifest));
}

RunManifest read_manifest(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    RunManifest manifest;
    bool header_seen = false;
    int line_no = 0;
    for (std::string_view line : split_char(content, '\n')) {
        ++line_no;
        if (trim(line).empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": " + e.what());
        }
        try {
            const std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                if (header_seen)
                    throw ParseError("duplicate manifest header");
                header_seen = true;
                manifest.tool_version = j.at("tool_version").get<std::string>();
                manifest.plan_digest = j.at("plan_digest").get<std::string>();
                manifest.master_seed = j.at("master_seed").get<std::uint64_t>();
                manifest.config = j.at("config");
            } else {
                manifest.records.push_back(record_from_json(j));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": " + e.what());
        }
    }
    if (!header_seen)
        throw ParseError(path.string() + ": missing manifest header");
    return manifest;
}

std::vector<std::string>
verify_manifest(const RunManifest& manifest,
                const std::filesystem::path& run_dir) {
    std::vector<std::string> problems;
    std::set<std::string> listed;
    for (const ManifestRecord& rec : manifest.records) {
        if (rec.skipped)
            continue;
        if (!listed.insert(rec.output).second) {
            problems.push_back("duplicate output path: " + rec.output);
            continue;
        }
        const auto file = run_dir / rec.output;
        if (!std::filesystem::exists(file)) {
            problems.push_back("missing output file: " + rec.output);
            continue;
        }
        const std::string content = read_text_file(file);
        const std::string digest = sha256_hex(
            reinterpret_cast<const std::uint8_t*>(content.data()),
            content.size());
        if (digest != rec.digest)
            problems.push_back("digest mismatch: " + rec.output);
    }
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(run_dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string rel =
            std::filesystem::relative(entry.path(), run_dir).generic_string();
        if (rel == kManifestFilename)
            continue;
        if (!listed.contains(rel))
            problems.push_back("file not in manifest: " + rel);
    }
    std::sort(problems.begin(), problems.end());
    return problems;
}

} // namespace forgery
