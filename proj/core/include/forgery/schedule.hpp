#pragma once

#include <filesystem>
#include <vector>

namespace forgery {

/// AdamW hyperparameters emitted into schedule headers for downstream
/// trainers. The optimizer update itself is out of scope here.
struct OptimizerConfig {
    double eps = 1e-8;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 0.1;
    double grad_clip = 5.0;
};

void validate_config(const OptimizerConfig& cfg);

/// Linear warmup to base_lr over warmup_epochs, then half-cosine decay to
/// min_lr over the remaining epochs.
struct StageSchedule {
    int warmup_epochs = 5;
    double base_lr = 0.0;
    double warmup_lr = 0.0;
    double min_lr = 0.0;
    int total_epochs = 0;
    int steps_per_epoch = 0;

    long total_steps() const {
        return static_cast<long>(total_epochs) * steps_per_epoch;
    }
    long warmup_steps() const {
        return static_cast<long>(warmup_epochs) * steps_per_epoch;
    }
};

void validate_stage(const StageSchedule& stage);

/// Fine-tuning stage presets (epoch counts default to the midpoints of the
/// 30-40 / 10-20 ranges).
StageSchedule stage_one_schedule(int steps_per_epoch, int total_epochs = 35);
StageSchedule stage_two_schedule(int steps_per_epoch, int total_epochs = 15);

/// Learning rate at a step in [0, total_steps]; the boundary step of the
/// warmup evaluates identically under both branches.
double lr_at(const StageSchedule& stage, long step);

/// Scale the vector down to max_norm when its L2 norm exceeds it; direction
/// is preserved and the norm never increases. Non-finite entries are a
/// NumericError.
std::vector<double> clip_gradient_norm(std::vector<double> grads,
                                       double max_norm);

struct ScheduleRow {
    int stage = 0; ///< 1 or 2
    int epoch = 0;
    long step = 0;
    double lr = 0.0;
};

/// Concatenated per-step table; each stage covers steps 0..total_steps
/// inclusive (the final row carries the end-of-stage lr) and stage two
/// restarts its own warmup.
std::vector<ScheduleRow> emit_schedule(const StageSchedule& stage1,
                                       const StageSchedule& stage2);

/// CSV `stage,epoch,step,lr` preceded by a comment header carrying the
/// optimizer configuration.
void write_schedule_csv(const std::filesystem::path& path,
                        const StageSchedule& stage1,
                        const StageSchedule& stage2,
                        const OptimizerConfig& cfg);

} // namespace forgery
