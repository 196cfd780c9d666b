#include "forgery/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "forgery/errors.hpp"

namespace forgery {

void validate_policy(const CorrectionPolicy& policy) {
    if (!(policy.tau > 0.0) || !(policy.tau < 0.5))
        throw ParameterError("correction policy: tau must be in (0, 0.5)");
    if (std::abs(policy.delta) > policy.tau)
        throw ParameterError(
            "correction policy: |delta| must not exceed tau (monotonicity)");
}

const char* evidence_name(Evidence e) {
    switch (e) {
    case Evidence::toward_fake:
        return "no_face";
    case Evidence::toward_real:
        return "consistent_face";
    case Evidence::neutral:
        return "mixed";
    }
    return "mixed";
}

Evidence evidence_for(const ScoreRecord& rec) {
    if (rec.haar_faces == 0 && !rec.landmarks_present)
        return Evidence::toward_fake;
    if (rec.landmarks_inside_haar)
        return Evidence::toward_real;
    return Evidence::neutral;
}

double correct_score(const ScoreRecord& rec, const CorrectionPolicy& policy) {
    validate_policy(policy);
    if (rec.raw_score < 0.0 || rec.raw_score > 1.0)
        throw ParameterError("correct_score: raw score outside [0,1]");

    double push = 0.0;
    switch (evidence_for(rec)) {
    case Evidence::toward_fake:
        push = policy.delta;
        break;
    case Evidence::toward_real:
        push = -policy.delta;
        break;
    case Evidence::neutral:
        push = 0.0;
        break;
    }
    const double weight =
        std::max(0.0, 1.0 - std::abs(rec.raw_score - 0.5) / policy.tau);
    return std::clamp(rec.raw_score + push * weight, 0.0, 1.0);
}

BatchCorrectionResult
batch_correct(const std::vector<std::pair<std::string, double>>& scores,
              const std::map<std::string, std::vector<Detection>>& detections,
              const std::map<std::string, LandmarkSet>& landmarks,
              const CorrectionPolicy& policy) {
    validate_policy(policy);

    std::set<std::string> seen;
    BatchCorrectionResult result;
    result.rows.reserve(scores.size());
    for (const auto& [id, raw] : scores) {
        if (!seen.insert(id).second)
            throw ValidationError("batch_correct: duplicate image id '" + id +
                                  "'");
        ScoreRecord rec;
        rec.image_id = id;
        rec.raw_score = raw;

        const auto det_it = detections.find(id);
        const auto lms_it = landmarks.find(id);
        if (det_it == detections.end() && lms_it == landmarks.end())
            ++result.summary.missing_evidence;
        rec.haar_faces = det_it == detections.end()
                             ? 0
                             : static_cast<int>(det_it->second.size());
        rec.landmarks_present = lms_it != landmarks.end();
        if (rec.landmarks_present && rec.haar_faces > 0) {
            const auto centroid = landmark_centroid(lms_it->second);
            const int cx = static_cast<int>(std::floor(centroid[0]));
            const int cy = static_cast<int>(std::floor(centroid[1]));
            rec.landmarks_inside_haar =
                std::any_of(det_it->second.begin(), det_it->second.end(),
                            [&](const Detection& d) {
                                return d.box.contains(cx, cy);
                            });
        }

        rec.corrected_score = correct_score(rec, policy);
        if (rec.corrected_score > rec.raw_score)
            ++result.summary.raised;
        else if (rec.corrected_score < rec.raw_score)
            ++result.summary.lowered;
        else
            ++result.summary.untouched;
        result.rows.push_back(std::move(rec));
    }
    return result;
}

} // namespace forgery
