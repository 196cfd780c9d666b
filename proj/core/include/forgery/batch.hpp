#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forgery/dataset.hpp"
#include "forgery/detect.hpp"
#include "forgery/manifest.hpp"
#include "forgery/plan.hpp"
#include "forgery/postprocess.hpp"

namespace forgery {

struct ExecuteOptions {
    int workers = 1;
    /// Attempts per item before the run aborts; each failed attempt leaves a
    /// skip record and redraws the source deterministically.
    int max_attempts = 100;
};

/// Run every plan entry to exactly its target count, writing PNGs plus the
/// run manifest (written last, atomically) into out_dir. Outputs are a pure
/// function of (plan, master seed, corpus): item streams are
/// mix(master_seed, entry, item, attempt), so worker count cannot change a
/// byte. out_dir must be empty (or absent); unfulfillable entries abort
/// before any work.
RunManifest execute_plan(const GenerationPlan& plan, const SourceIndex& index,
                         const std::filesystem::path& out_dir,
                         const ExecuteOptions& options = {});

struct DetectionReportRow {
    std::string image_id;
    std::vector<Detection> detections;
};

struct DetectionReport {
    std::vector<DetectionReportRow> rows; ///< sorted by image_id
};

/// Detect over every image under `dir` (recursive, sorted ids). Deterministic;
/// per-image work fans across `workers`.
DetectionReport run_detect(const std::filesystem::path& dir,
                           const CascadeModel& model,
                           const DetectParams& params, int workers = 1);

/// CSV: `image_id,num_faces,boxes`; boxes is `;`-joined `x y w h neighbors`.
std::string format_detection_report(const DetectionReport& report);
void write_detection_report(const std::filesystem::path& path,
                            const DetectionReport& report);
DetectionReport read_detection_report(const std::filesystem::path& path);

/// `image_id,score` with header. Duplicate ids are rejected downstream.
std::vector<std::pair<std::string, double>>
read_score_csv(const std::filesystem::path& path);

/// `image_id,raw_score,corrected_score,evidence` with header.
std::string format_corrected_csv(const std::vector<ScoreRecord>& rows);

/// Join scores with a detection report and a landmark sidecar directory,
/// correct, and write the output CSV. `landmarks_dir` may be empty (no
/// landmark evidence at all).
BatchCorrectionResult run_postprocess(const std::filesystem::path& scores_csv,
                                      const std::filesystem::path& report_csv,
                                      const std::filesystem::path& landmarks_dir,
                                      const CorrectionPolicy& policy,
                                      const std::filesystem::path& out_csv);

/// Apply the online augmentation chain to every image under in_dir, writing
/// PNGs with the same relative names under out_dir. Streams derive from the
/// sorted image ids, so results are order- and worker-independent.
void run_augment(const std::filesystem::path& in_dir,
                 const std::filesystem::path& out_dir, std::uint64_t seed,
                 const OnlinePolicy& policy, int workers = 1);

} // namespace forgery
