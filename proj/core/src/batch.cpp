#include "forgery/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "forgery/codec.hpp"
#include "forgery/digest.hpp"
#include "forgery/errors.hpp"
#include "forgery/text.hpp"
#include "forgery/version.hpp"

namespace forgery {

namespace {

/// Run fn(i) for i in [0, count) across `workers` threads; the first
/// exception wins and is rethrown after all threads join.
void parallel_for(long count, int workers,
                  const std::function<void(long)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || count <= 1) {
        for (long i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            for (;;) {
                const long i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : threads)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

std::string item_output_name(const PlanEntry& entry, int entry_index,
                             long item_index) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_e%02d_i%06ld.png",
                  recipe_name(entry.recipe), entry_index, item_index);
    return buf;
}

std::vector<std::filesystem::path>
list_images(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("directory missing: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace

RunManifest execute_plan(const GenerationPlan& plan, const SourceIndex& index,
                         const std::filesystem::path& out_dir,
                         const ExecuteOptions& options) {
    if (options.workers < 1)
        throw ParameterError("execute_plan: workers must be >= 1");
    if (std::filesystem::exists(out_dir)) {
        if (!std::filesystem::is_directory(out_dir))
            throw IoError("output path is not a directory: " + out_dir.string());
        if (!std::filesystem::is_empty(out_dir))
            throw ValidationError("output directory not empty: " +
                                  out_dir.string());
    } else {
        std::filesystem::create_directories(out_dir);
    }

    const std::uint64_t master_seed = plan.master_seed.value_or(0);

    // Resolve every entry's source pool up front; an unfulfillable entry
    // aborts before any file is written.
    struct EntryWork {
        const PlanEntry* entry;
        std::vector<const SourceEntry*> pool;
    };
    std::vector<EntryWork> work;
    for (const PlanEntry& entry : plan.entries) {
        EntryWork w;
        w.entry = &entry;
        w.pool =
            index.pool(entry.source_filter, recipe_needs_landmarks(entry.recipe));
        if (entry.target_count > 0 && w.pool.empty())
            throw ValidationError(
                std::string("plan entry '") + recipe_name(entry.recipe) +
                "' is unfulfillable: no sources match filter '" +
                entry.source_filter +
                (recipe_needs_landmarks(entry.recipe) ? "' with landmarks"
                                                      : "'"));
        work.push_back(std::move(w));
    }

    struct Item {
        int entry_index;
        long item_index;
    };
    std::vector<Item> items;
    for (std::size_t e = 0; e < work.size(); ++e)
        for (long i = 0; i < work[e].entry->target_count; ++i)
            items.push_back({static_cast<int>(e), i});

    std::vector<std::vector<ManifestRecord>> per_item(items.size());
    parallel_for(
        static_cast<long>(items.size()), options.workers, [&](long idx) {
            const Item item = items[idx];
            const EntryWork& w = work[item.entry_index];
            const PlanEntry& entry = *w.entry;

            for (int attempt = 0;; ++attempt) {
                if (attempt >= options.max_attempts)
                    throw Error(std::string("entry '") +
                                recipe_name(entry.recipe) + "' item " +
                                std::to_string(item.item_index) +
                                ": attempt budget exhausted");
                const std::uint64_t stream = DeterministicRng::mix(
                    static_cast<std::uint64_t>(item.entry_index),
                    static_cast<std::uint64_t>(item.item_index),
                    static_cast<std::uint64_t>(attempt));
                DeterministicRng rng(master_seed, stream);
                const std::uint64_t item_seed =
                    DeterministicRng::mix(master_seed, stream);

                const SourceEntry& source =
                    *w.pool[rng.uniform_u64(w.pool.size())];

                ManifestRecord rec;
                rec.entry_index = item.entry_index;
                rec.item_index = item.item_index;
                rec.attempt = attempt;
                rec.recipe = recipe_name(entry.recipe);
                rec.source_id = source.id;
                rec.seed = item_seed;

                try {
                    const ImageBuffer image = load_image(source.path);
                    const LandmarkSet* lms_ptr = nullptr;
                    LandmarkSet lms;
                    if (recipe_needs_landmarks(entry.recipe)) {
                        lms = load_landmarks(source.landmark_path);
                        lms_ptr = &lms;
                    }
                    GeneratedSample sample = run_recipe(
                        entry.recipe, image, lms_ptr, entry.params, rng);

                    const std::vector<std::uint8_t> png =
                        encode_png(sample.image);
                    rec.label = sample.label;
                    rec.output =
                        item_output_name(entry, item.entry_index, item.item_index);
                    rec.digest = sha256_hex(png);
                    rec.params = sample.params_used;

                    std::ofstream out(out_dir / rec.output,
                                      std::ios::binary | std::ios::trunc);
                    if (!out)
                        throw IoError("cannot create " +
                                      (out_dir / rec.output).string());
                    out.write(reinterpret_cast<const char*>(png.data()),
                              static_cast<std::streamsize>(png.size()));
                    if (!out)
                        throw IoError("write failed: " +
                                      (out_dir / rec.output).string());

                    per_item[idx].push_back(std::move(rec));
                    return;
                } catch (const InapplicableError& e) {
                    rec.skipped = true;
                    rec.skip_reason = e.what();
                } catch (const ParseError& e) {
                    rec.skipped = true;
                    rec.skip_reason = e.what();
                } catch (const ValidationError& e) {
                    rec.skipped = true;
                    rec.skip_reason = e.what();
                }
                per_item[idx].push_back(std::move(rec));
            }
        });

    RunManifest manifest;
    manifest.tool_version = kVersion;
    manifest.plan_digest = plan_digest(plan);
    manifest.master_seed = master_seed;
    manifest.config = nlohmann::json::array();
    for (const PlanEntry& entry : plan.entries)
        manifest.config.push_back(plan_entry_config(entry));

    for (auto& records : per_item)
        for (ManifestRecord& rec : records)
            manifest.records.push_back(std::move(rec));
    std::sort(manifest.records.begin(), manifest.records.end(),
              [](const ManifestRecord& a, const ManifestRecord& b) {
                  return std::tie(a.entry_index, a.item_index, a.attempt) <
                         std::tie(b.entry_index, b.item_index, b.attempt);
              });

    // With-replacement bookkeeping: flag any draw of a source already seen
    // earlier in the same entry (deterministic: records are fully sorted).
    std::set<std::pair<int, std::string>> seen;
    for (ManifestRecord& rec : manifest.records)
        rec.source_reused =
            !seen.insert({rec.entry_index, rec.source_id}).second;

    write_manifest(out_dir / kManifestFilename, manifest);
    return manifest;
}

DetectionReport run_detect(const std::filesystem::path& dir,
                           const CascadeModel& model,
                           const DetectParams& params, int workers) {
    const std::vector<std::filesystem::path> files = list_images(dir);
    DetectionReport report;
    report.rows.resize(files.size());
    parallel_for(static_cast<long>(files.size()), workers, [&](long i) {
        DetectionReportRow row;
        row.image_id = std::filesystem::relative(files[i], dir).generic_string();
        row.detections = detect_multiscale(model, load_image(files[i]), params);
        report.rows[i] = std::move(row);
    });
    return report;
}

std::string format_detection_report(const DetectionReport& report) {
    std::string out = "image_id,num_faces,boxes\n";
    for (const DetectionReportRow& row : report.rows) {
        out += row.image_id + "," + std::to_string(row.detections.size()) + ",";
        for (std::size_t i = 0; i < row.detections.size(); ++i) {
            const Detection& d = row.detections[i];
            if (i > 0)
                out += ";";
            out += std::to_string(d.box.x) + " " + std::to_string(d.box.y) +
                   " " + std::to_string(d.box.w) + " " + std::to_string(d.box.h) +
                   " " + std::to_string(d.neighbors);
        }
        out += "\n";
    }
    return out;
}

void write_detection_report(const std::filesystem::path& path,
                            const DetectionReport& report) {
    write_text_file(path, format_detection_report(report));
}

DetectionReport read_detection_report(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    const auto lines = split_char(content, '\n');
    if (lines.empty() || trim(lines[0]) != "image_id,num_faces,boxes")
        throw ParseError(path.string() +
                         ": expected header 'image_id,num_faces,boxes'");
    DetectionReport report;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto line = trim(lines[n]);
        if (line.empty())
            continue;
        const auto fields = split_char(line, ',');
        if (fields.size() != 3)
            throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                             ": expected 3 fields");
        DetectionReportRow row;
        row.image_id = std::string(fields[0]);
        const auto count = parse_int(fields[1]);
        if (!count || *count < 0)
            throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                             ": bad face count");
        if (!trim(fields[2]).empty()) {
            for (std::string_view box_text : split_char(fields[2], ';')) {
                const auto nums = split_whitespace(box_text);
                if (nums.size() != 5)
                    throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                                     ": box must be 'x y w h neighbors'");
                int vals[5];
                for (int i = 0; i < 5; ++i) {
                    const auto v = parse_int(nums[i]);
                    if (!v)
                        throw ParseError(path.string() + ":" +
                                         std::to_string(n + 1) +
                                         ": non-numeric box field");
                    vals[i] = static_cast<int>(*v);
                }
                row.detections.push_back(
                    {Rect{vals[0], vals[1], vals[2], vals[3]}, vals[4]});
            }
        }
        if (*count != static_cast<long long>(row.detections.size()))
            throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                             ": num_faces disagrees with the box list");
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<std::pair<std::string, double>>
read_score_csv(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    const auto lines = split_char(content, '\n');
    if (lines.empty() || trim(lines[0]) != "image_id,score")
        throw ParseError(path.string() + ": expected header 'image_id,score'");
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto line = trim(lines[n]);
        if (line.empty())
            continue;
        const auto fields = split_char(line, ',');
        if (fields.size() != 2)
            throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                             ": expected 'image_id,score'");
        const auto score = parse_double(trim(fields[1]));
        if (!score || !(*score >= 0.0 && *score <= 1.0))
            throw ParseError(path.string() + ":" + std::to_string(n + 1) +
                             ": score must be a number in [0,1]");
        out.emplace_back(std::string(trim(fields[0])), *score);
    }
    return out;
}

std::string format_corrected_csv(const std::vector<ScoreRecord>& rows) {
    std::string out = "image_id,raw_score,corrected_score,evidence\n";
    for (const ScoreRecord& rec : rows) {
        out += rec.image_id + "," + format_double(rec.raw_score) + "," +
               format_double(rec.corrected_score) + "," +
               evidence_name(evidence_for(rec)) + "\n";
    }
    return out;
}

BatchCorrectionResult run_postprocess(const std::filesystem::path& scores_csv,
                                      const std::filesystem::path& report_csv,
                                      const std::filesystem::path& landmarks_dir,
                                      const CorrectionPolicy& policy,
                                      const std::filesystem::path& out_csv) {
    const auto scores = read_score_csv(scores_csv);
    const DetectionReport report = read_detection_report(report_csv);
    std::map<std::string, std::vector<Detection>> detections;
    for (const DetectionReportRow& row : report.rows)
        detections[row.image_id] = row.detections;

    std::map<std::string, LandmarkSet> landmarks;
    if (!landmarks_dir.empty())
        landmarks = load_landmark_dir(landmarks_dir);

    BatchCorrectionResult result =
        batch_correct(scores, detections, landmarks, policy);
    write_text_file(out_csv, format_corrected_csv(result.rows));
    return result;
}

void run_augment(const std::filesystem::path& in_dir,
                 const std::filesystem::path& out_dir, std::uint64_t seed,
                 const OnlinePolicy& policy, int workers) {
    const std::vector<std::filesystem::path> files = list_images(in_dir);
    std::filesystem::create_directories(out_dir);
    parallel_for(static_cast<long>(files.size()), workers, [&](long i) {
        const std::string id =
            std::filesystem::relative(files[i], in_dir).generic_string();
        DeterministicRng rng(seed, static_cast<std::uint64_t>(i));
        const ImageBuffer augmented =
            online_augment(load_image(files[i]), rng, policy);
        std::filesystem::path out_path = out_dir / id;
        out_path.replace_extension(".png");
        std::filesystem::create_directories(out_path.parent_path());
        save_image(out_path, augmented);
    });
}

} // namespace forgery
