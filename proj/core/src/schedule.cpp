#include "forgery/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

void validate_config(const OptimizerConfig& cfg) {
    if (!(cfg.eps > 0.0))
        throw ParameterError("optimizer config: eps must be > 0");
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < cfg.beta2 && cfg.beta2 < 1.0))
        throw ParameterError("optimizer config: need 0 < beta1 < beta2 < 1");
    if (!(cfg.grad_clip > 0.0))
        throw ParameterError("optimizer config: grad_clip must be > 0");
}

void validate_stage(const StageSchedule& stage) {
    if (stage.steps_per_epoch <= 0)
        throw ParameterError("schedule: steps_per_epoch must be > 0");
    if (stage.warmup_epochs < 0 || stage.warmup_epochs >= stage.total_epochs)
        throw ParameterError("schedule: warmup_epochs must be < total_epochs");
    if (!(stage.base_lr > 0.0 && stage.warmup_lr > 0.0 && stage.min_lr > 0.0))
        throw ParameterError("schedule: learning rates must be > 0");
    if (stage.warmup_lr > stage.base_lr || stage.min_lr > stage.base_lr)
        throw ParameterError(
            "schedule: warmup_lr and min_lr must not exceed base_lr");
}

StageSchedule stage_one_schedule(int steps_per_epoch, int total_epochs) {
    StageSchedule stage;
    stage.warmup_epochs = 5;
    stage.base_lr = 5e-5;
    stage.warmup_lr = 5e-8;
    stage.min_lr = 5e-7;
    stage.total_epochs = total_epochs;
    stage.steps_per_epoch = steps_per_epoch;
    validate_stage(stage);
    return stage;
}

StageSchedule stage_two_schedule(int steps_per_epoch, int total_epochs) {
    StageSchedule stage;
    stage.warmup_epochs = 5;
    stage.base_lr = 5e-6;
    stage.warmup_lr = 5e-9;
    stage.min_lr = 5e-9;
    stage.total_epochs = total_epochs;
    stage.steps_per_epoch = steps_per_epoch;
    validate_stage(stage);
    return stage;
}

double lr_at(const StageSchedule& stage, long step) {
    validate_stage(stage);
    const long total = stage.total_steps();
    const long warmup = stage.warmup_steps();
    if (step < 0 || step > total)
        throw ParameterError("lr_at: step " + std::to_string(step) +
                             " outside [0, " + std::to_string(total) + "]");
    if (step < warmup)
        return stage.warmup_lr +
               (stage.base_lr - stage.warmup_lr) * static_cast<double>(step) /
                   static_cast<double>(warmup);
    const double progress = static_cast<double>(step - warmup) /
                            static_cast<double>(total - warmup);
    return stage.min_lr + 0.5 * (stage.base_lr - stage.min_lr) *
                              (1.0 + std::cos(std::numbers::pi * progress));
}

std::vector<double> clip_gradient_norm(std::vector<double> grads,
                                       double max_norm) {
    if (!(max_norm > 0.0))
        throw ParameterError("clip_gradient_norm: max_norm must be > 0");
    double sq = 0.0;
    for (double g : grads) {
        if (!std::isfinite(g))
            throw NumericError("clip_gradient_norm: non-finite gradient entry");
        sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (norm <= max_norm)
        return grads;
    const double scale = max_norm / norm;
    for (double& g : grads)
        g *= scale;
    return grads;
}

std::vector<ScheduleRow> emit_schedule(const StageSchedule& stage1,
                                       const StageSchedule& stage2) {
    validate_stage(stage1);
    validate_stage(stage2);
    std::vector<ScheduleRow> rows;
    rows.reserve(static_cast<std::size_t>(stage1.total_steps() +
                                          stage2.total_steps() + 2));
    int stage_id = 1;
    for (const StageSchedule* stage : {&stage1, &stage2}) {
        for (long step = 0; step <= stage->total_steps(); ++step) {
            ScheduleRow row;
            row.stage = stage_id;
            row.epoch = static_cast<int>(step / stage->steps_per_epoch);
            row.step = step;
            row.lr = lr_at(*stage, step);
            rows.push_back(row);
        }
        ++stage_id;
    }
    return rows;
}

void write_schedule_csv(const std::filesystem::path& path,
                        const StageSchedule& stage1,
                        const StageSchedule& stage2,
                        const OptimizerConfig& cfg) {
    validate_config(cfg);
    std::string out;
    out += "# optimizer: adamw eps=" + format_double(cfg.eps) +
           " betas=(" + format_double(cfg.beta1) + "," +
           format_double(cfg.beta2) + ")" +
           " weight_decay=" + format_double(cfg.weight_decay) +
           " grad_clip=" + format_double(cfg.grad_clip) + "\n";
    out += "stage,epoch,step,lr\n";
    for (const ScheduleRow& row : emit_schedule(stage1, stage2)) {
        out += std::to_string(row.stage) + "," + std::to_string(row.epoch) +
               "," + std::to_string(row.step) + "," + format_double(row.lr) +
               "\n";
    }
    write_text_file(path, out);
}

} // namespace forgery
