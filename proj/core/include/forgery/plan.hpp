#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forgery/recipes.hpp"

namespace forgery {

struct PlanEntry {
    Recipe recipe = Recipe::binarize;
    long target_count = 0;
    std::string source_filter = "any"; ///< real | fake | any
    std::string stage_tag;             ///< optional metadata, not interpreted
    RecipeParams params;               ///< defaults + per-entry overrides
    nlohmann::json overrides;          ///< the raw overrides, for the manifest
};

struct GenerationPlan {
    std::vector<PlanEntry> entries;
    std::optional<std::uint64_t> master_seed; ///< plan-file seed; CLI overrides
    std::string text;                         ///< exact file content (hashed)
};

/// Plan file grammar: `key = value` lines, `#` comments, one `[entry]`
/// section per generation entry. A `seed = N` line before the first entry
/// sets the plan seed. Entry keys: recipe (required), count (required),
/// source, stage, and `<recipe>.<param>` overrides for the entry's own
/// recipe (e.g. `cutout.pad = 6`). Unknown keys are errors.
GenerationPlan parse_plan(const std::string& text);
GenerationPlan load_plan(const std::filesystem::path& path);

/// SHA-256 of the exact plan text.
std::string plan_digest(const GenerationPlan& plan);

/// JSON echo of an entry's resolved configuration (for manifest headers).
nlohmann::json plan_entry_config(const PlanEntry& entry);

} // namespace forgery
