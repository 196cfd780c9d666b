#include "forgery/plan.hpp"

#include <functional>
#include <map>

#include "forgery/digest.hpp"
#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

struct ParamSetter {
    std::function<void(RecipeParams&, std::string_view)> apply;
};

[[noreturn]] void bad_value(int line_no, std::string_view key,
                            std::string_view value) {
    throw ParseError("plan:" + std::to_string(line_no) + ": bad value '" +
                     std::string(value) + "' for " + std::string(key));
}

double need_double(int line_no, std::string_view key, std::string_view value) {
    const auto v = parse_double(value);
    if (!v)
        bad_value(line_no, key, value);
    return *v;
}

int need_int(int line_no, std::string_view key, std::string_view value) {
    const auto v = parse_int(value);
    if (!v)
        bad_value(line_no, key, value);
    return static_cast<int>(*v);
}

// <recipe>.<param> override table; every key is only legal on an entry whose
// recipe matches the prefix.
bool apply_param_override(PlanEntry& entry, std::string_view key,
                          std::string_view value, int line_no) {
    const auto dot = key.find('.');
    if (dot == std::string_view::npos)
        return false;
    const std::string_view prefix = key.substr(0, dot);
    const std::string_view param = key.substr(dot + 1);
    if (prefix != recipe_name(entry.recipe))
        throw ParseError("plan:" + std::to_string(line_no) + ": override '" +
                         std::string(key) + "' does not match entry recipe '" +
                         recipe_name(entry.recipe) + "'");

    RecipeParams& p = entry.params;
    if (prefix == "cutout") {
        if (param == "per_region_prob")
            p.cutout.per_region_prob = need_double(line_no, key, value);
        else if (param == "pad")
            p.cutout.pad = need_int(line_no, key, value);
        else
            return false;
    } else if (prefix == "crop") {
        if (param == "crop_size")
            p.crop.crop_size = need_int(line_no, key, value);
        else if (param == "out_size")
            p.crop.out_size = need_int(line_no, key, value);
        else
            return false;
    } else if (prefix == "overlay") {
        if (param == "num_shifts")
            p.overlay.num_shifts = need_int(line_no, key, value);
        else if (param == "max_shift")
            p.overlay.max_shift = need_int(line_no, key, value);
        else
            return false;
    } else if (prefix == "cartoon") {
        if (param == "k_colors")
            p.cartoon.k_colors = need_int(line_no, key, value);
        else if (param == "block")
            p.cartoon.block = need_int(line_no, key, value);
        else if (param == "c")
            p.cartoon.c = need_double(line_no, key, value);
        else if (param == "median_kernel")
            p.cartoon.median_kernel = need_int(line_no, key, value);
        else if (param == "kmeans_max_iters")
            p.cartoon.kmeans_max_iters = need_int(line_no, key, value);
        else
            return false;
    } else if (prefix == "sketch") {
        if (param == "blur_sigma")
            p.sketch.blur_sigma = need_double(line_no, key, value);
        else if (param == "blur_kernel")
            p.sketch.blur_kernel = need_int(line_no, key, value);
        else
            return false;
    } else if (prefix == "binarize") {
        if (param == "center")
            p.binarize.center = need_int(line_no, key, value);
        else if (param == "jitter")
            p.binarize.jitter = need_int(line_no, key, value);
        else
            return false;
    } else {
        return false;
    }
    entry.overrides[std::string(key)] = std::string(value);
    return true;
}

} // namespace

GenerationPlan parse_plan(const std::string& text) {
    GenerationPlan plan;
    plan.text = text;

    PlanEntry* current = nullptr;
    bool recipe_seen = false;
    bool count_seen = false;
    int line_no = 0;

    auto finish_entry = [&]() {
        if (!current)
            return;
        if (!recipe_seen)
            throw ParseError("plan: entry missing 'recipe'");
        if (!count_seen)
            throw ParseError("plan: entry missing 'count'");
    };

    for (std::string_view raw : split_char(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line == "[entry]") {
            finish_entry();
            plan.entries.emplace_back();
            current = &plan.entries.back();
            current->overrides = nlohmann::json::object();
            recipe_seen = count_seen = false;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("plan:" + std::to_string(line_no) +
                             ": expected 'key = value', got '" +
                             std::string(line) + "'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));

        if (!current) {
            if (key == "seed") {
                const auto seed = parse_u64(value);
                if (!seed)
                    bad_value(line_no, key, value);
                plan.master_seed = *seed;
                continue;
            }
            throw ParseError("plan:" + std::to_string(line_no) + ": key '" +
                             std::string(key) + "' before the first [entry]");
        }

        if (key == "recipe") {
            const auto recipe = recipe_from_name(value);
            if (!recipe)
                throw ParseError("plan:" + std::to_string(line_no) +
                                 ": unknown recipe '" + std::string(value) + "'");
            if (!current->overrides.empty())
                throw ParseError("plan:" + std::to_string(line_no) +
                                 ": recipe must come before its overrides");
            current->recipe = *recipe;
            recipe_seen = true;
        } else if (key == "count") {
            const auto count = parse_int(value);
            if (!count || *count < 0)
                bad_value(line_no, key, value);
            current->target_count = *count;
            count_seen = true;
        } else if (key == "source") {
            if (value != "real" && value != "fake" && value != "any")
                bad_value(line_no, key, value);
            current->source_filter = std::string(value);
        } else if (key == "stage") {
            current->stage_tag = std::string(value);
        } else if (!recipe_seen) {
            throw ParseError("plan:" + std::to_string(line_no) +
                             ": 'recipe' must be the first entry key");
        } else if (!apply_param_override(*current, key, value, line_no)) {
            throw ParseError("plan:" + std::to_string(line_no) +
                             ": unknown key '" + std::string(key) + "'");
        }
    }
    finish_entry();
    if (plan.entries.empty())
        throw ParseError("plan: no [entry] sections");
    return plan;
}

GenerationPlan load_plan(const std::filesystem::path& path) {
    try {
        return parse_plan(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string plan_digest(const GenerationPlan& plan) {
    return sha256_hex(plan.text);
}

nlohmann::json plan_entry_config(const PlanEntry& entry) {
    nlohmann::json cfg = {{"recipe", recipe_name(entry.recipe)},
                          {"count", entry.target_count},
                          {"source", entry.source_filter},
                          {"overrides", entry.overrides}};
    if (!entry.stage_tag.empty())
        cfg["stage"] = entry.stage_tag;
    const RecipeParams& p = entry.params;
    switch (entry.recipe) {
    case Recipe::cutout:
        cfg["params"] = {{"per_region_prob", p.cutout.per_region_prob},
                         {"pad", p.cutout.pad}};
        break;
    case Recipe::crop:
        cfg["params"] = {{"crop_size", p.crop.crop_size},
                         {"out_size", p.crop.out_size}};
        break;
    case Recipe::overlay:
        cfg["params"] = {{"num_shifts", p.overlay.num_shifts},
                         {"max_shift", p.overlay.max_shift}};
        break;
    case Recipe::cartoon:
        cfg["params"] = {{"k_colors", p.cartoon.k_colors},
                         {"block", p.cartoon.block},
                         {"c", p.cartoon.c},
                         {"median_kernel", p.cartoon.median_kernel},
                         {"kmeans_max_iters", p.cartoon.kmeans_max_iters}};
        break;
    case Recipe::sketch:
        cfg["params"] = {{"blur_sigma", p.sketch.blur_sigma},
                         {"blur_kernel", p.sketch.blur_kernel}};
        break;
    case Recipe::binarize:
        cfg["params"] = {{"center", p.binarize.center},
                         {"jitter", p.binarize.jitter}};
        break;
    }
    return cfg;
}

} // namespace forgery
