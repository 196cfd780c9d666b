// forgery: deterministic negative-sample generation, face detection, score
// post-processing, and schedule export for deepfake-detection datasets.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "forgery/batch.hpp"
#include "forgery/cascade.hpp"
#include "forgery/dataset.hpp"
#include "forgery/errors.hpp"
#include "forgery/schedule.hpp"
#include "forgery/synth.hpp"
#include "forgery/version.hpp"

namespace {

namespace fs = std::filesystem;

int cmd_scan(const std::string& root, const std::string& labels) {
    const forgery::SourceIndex index = forgery::scan_dataset(root, labels);
    long with_landmarks = 0;
    long real = 0;
    for (const auto& entry : index.entries) {
        with_landmarks += entry.has_landmarks ? 1 : 0;
        real += entry.label == "real" ? 1 : 0;
    }
    std::printf("indexed %zu images (%ld real, %ld fake), %ld with landmarks\n",
                index.entries.size(), real,
                static_cast<long>(index.entries.size()) - real, with_landmarks);
    for (const auto& id : index.report.undecodable)
        std::printf("undecodable: %s\n", id.c_str());
    for (const auto& id : index.report.unlabeled)
        std::printf("unlabeled: %s\n", id.c_str());
    for (const auto& id : index.report.labels_without_image)
        std::printf("label without image: %s\n", id.c_str());
    return 0;
}

int cmd_generate(const std::string& plan_path, const std::string& root,
                 const std::string& labels, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, int workers) {
    forgery::GenerationPlan plan = forgery::load_plan(plan_path);
    if (seed)
        plan.master_seed = *seed;
    const forgery::SourceIndex index = forgery::scan_dataset(root, labels);
    forgery::ExecuteOptions options;
    options.workers = workers;
    const forgery::RunManifest manifest =
        forgery::execute_plan(plan, index, out_dir, options);
    long produced = 0;
    long skipped = 0;
    for (const auto& rec : manifest.records)
        (rec.skipped ? skipped : produced) += 1;
    std::printf("generated %ld samples (%ld skip records) into %s\n", produced,
                skipped, out_dir.c_str());
    return 0;
}

int cmd_augment(const std::string& in_dir, const std::string& out_dir,
                std::uint64_t seed, int workers) {
    forgery::run_augment(in_dir, out_dir, seed, forgery::OnlinePolicy{},
                         workers);
    std::printf("augmented images written to %s\n", out_dir.c_str());
    return 0;
}

int cmd_detect(const std::string& in_dir, const std::string& cascade_path,
               const std::string& report_path,
               const forgery::DetectParams& params, int workers) {
    const forgery::CascadeModel model = forgery::load_cascade(cascade_path);
    const forgery::DetectionReport report =
        forgery::run_detect(in_dir, model, params, workers);
    forgery::write_detection_report(report_path, report);
    long faces = 0;
    for (const auto& row : report.rows)
        faces += static_cast<long>(row.detections.size());
    std::printf("detected %ld faces over %zu images; report: %s\n", faces,
                report.rows.size(), report_path.c_str());
    return 0;
}

int cmd_postprocess(const std::string& scores, const std::string& report,
                    const std::string& landmarks, const std::string& out,
                    double tau, double delta) {
    forgery::CorrectionPolicy policy;
    policy.tau = tau;
    policy.delta = delta;
    const forgery::BatchCorrectionResult result = forgery::run_postprocess(
        scores, report, landmarks.empty() ? fs::path{} : fs::path{landmarks},
        policy, out);
    std::printf("raised %ld, lowered %ld, untouched %ld (%ld rows missing "
                "detection evidence)\n",
                result.summary.raised, result.summary.lowered,
                result.summary.untouched, result.summary.missing_evidence);
    return 0;
}

int cmd_schedule(int stage1_epochs, int stage2_epochs, int steps_per_epoch,
                 const std::string& out) {
    const auto stage1 =
        forgery::stage_one_schedule(steps_per_epoch, stage1_epochs);
    const auto stage2 =
        forgery::stage_two_schedule(steps_per_epoch, stage2_epochs);
    forgery::write_schedule_csv(out, stage1, stage2, forgery::OptimizerConfig{});
    std::printf("schedule written to %s\n", out.c_str());
    return 0;
}

int cmd_synth(const std::string& out_dir, long count, int size,
              std::uint64_t seed, double landmark_coverage) {
    forgery::SynthOptions options;
    options.count = count;
    options.width = size;
    options.height = size;
    options.seed = seed;
    options.landmark_coverage = landmark_coverage;
    forgery::synth_corpus(out_dir, options);
    std::printf("synthesized %ld images into %s\n", count, out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic deepfake-detection data pipeline"};
    app.set_version_flag("--version", forgery::kVersion);
    app.require_subcommand(1);

    // scan
    std::string root, labels;
    auto* scan = app.add_subcommand("scan", "index a dataset directory");
    scan->add_option("--root", root, "dataset root")->required();
    scan->add_option("--labels", labels, "labels CSV (image_id,label)")
        ->required();

    // generate
    std::string plan_path, out_dir;
    std::optional<std::uint64_t> seed_opt;
    int workers = 1;
    auto* generate =
        app.add_subcommand("generate", "run a generation plan to a directory");
    generate->add_option("--plan", plan_path, "plan file")->required();
    generate->add_option("--root", root, "dataset root")->required();
    generate->add_option("--labels", labels, "labels CSV")->required();
    generate->add_option("--out", out_dir, "output directory")->required();
    generate->add_option("--seed", seed_opt,
                         "master seed (overrides the plan file)");
    generate->add_option("--workers", workers, "worker threads")
        ->check(CLI::PositiveNumber);

    // augment
    std::string in_dir;
    std::uint64_t seed = 0;
    auto* augment = app.add_subcommand(
        "augment", "apply the online augmentation chain to a directory");
    augment->add_option("--in", in_dir, "input directory")->required();
    augment->add_option("--out", out_dir, "output directory")->required();
    augment->add_option("--seed", seed, "master seed");
    augment->add_option("--workers", workers, "worker threads")
        ->check(CLI::PositiveNumber);

    // detect
    std::string cascade_path, report_path;
    forgery::DetectParams det_params;
    auto* detect =
        app.add_subcommand("detect", "run Haar cascade face detection");
    detect->add_option("--in", in_dir, "image directory")->required();
    detect->add_option("--cascade", cascade_path, "cascade XML file")
        ->required();
    detect->add_option("--report", report_path, "output report CSV")
        ->required();
    detect->add_option("--scale-factor", det_params.scale_factor,
                       "pyramid scale factor (> 1)");
    detect->add_option("--min-neighbors", det_params.min_neighbors,
                       "minimum grouped hits per detection");
    detect->add_option("--min-size", det_params.min_size,
                       "minimum window side in pixels");
    detect->add_option("--workers", workers, "worker threads")
        ->check(CLI::PositiveNumber);

    // postprocess
    std::string scores_path, landmarks_dir, out_csv;
    double tau = 0.15;
    double delta = 0.10;
    auto* post = app.add_subcommand(
        "postprocess", "correct borderline scores with detector evidence");
    post->add_option("--scores", scores_path, "input CSV (image_id,score)")
        ->required();
    post->add_option("--report", report_path, "detection report CSV")
        ->required();
    post->add_option("--landmarks", landmarks_dir,
                     "landmark sidecar directory (optional)");
    post->add_option("--out", out_csv, "output CSV")->required();
    post->add_option("--tau", tau, "correction band half-width");
    post->add_option("--delta", delta, "correction push");

    // schedule
    int stage1_epochs = 35;
    int stage2_epochs = 15;
    int steps_per_epoch = 100;
    std::string schedule_out;
    auto* schedule = app.add_subcommand(
        "schedule", "emit the two-stage warmup/cosine learning-rate table");
    schedule->add_option("--stage1-epochs", stage1_epochs, "stage one epochs");
    schedule->add_option("--stage2-epochs", stage2_epochs, "stage two epochs");
    schedule->add_option("--steps-per-epoch", steps_per_epoch,
                         "steps per epoch")
        ->check(CLI::PositiveNumber);
    schedule->add_option("--out", schedule_out, "output CSV")->required();

    // synth
    long synth_count = 100;
    int synth_size = 256;
    double landmark_coverage = 1.0;
    auto* synth = app.add_subcommand(
        "synth", "generate a procedural face corpus for demos and tests");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--count", synth_count, "image count");
    synth->add_option("--size", synth_size, "square image side");
    synth->add_option("--seed", seed, "master seed");
    synth->add_option("--landmark-coverage", landmark_coverage,
                      "fraction of images with sidecars");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed())
            return cmd_scan(root, labels);
        if (generate->parsed())
            return cmd_generate(plan_path, root, labels, out_dir, seed_opt,
                                workers);
        if (augment->parsed())
            return cmd_augment(in_dir, out_dir, seed, workers);
        if (detect->parsed())
            return cmd_detect(in_dir, cascade_path, report_path, det_params,
                              workers);
        if (post->parsed())
            return cmd_postprocess(scores_path, report_path, landmarks_dir,
                                   out_csv, tau, delta);
        if (schedule->parsed())
            return cmd_schedule(stage1_epochs, stage2_epochs, steps_per_epoch,
                                schedule_out);
        if (synth->parsed())
            return cmd_synth(out_dir, synth_count, synth_size, seed,
                             landmark_coverage);
    } catch (const forgery::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const forgery::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const forgery::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const forgery::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const forgery::UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const forgery::InapplicableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
