#pragma once

#include <map>
#include <string>
#include <vector>

#include "forgery/detect.hpp"
#include "forgery/landmarks.hpp"

namespace forgery {

/// Per-image model probability plus detector evidence.
struct ScoreRecord {
    std::string image_id;
    double raw_score = 0.0; ///< probability of fake, in [0,1]
    int haar_faces = 0;
    bool landmarks_present = false;
    bool landmarks_inside_haar = false; ///< a Haar box contains the landmark centroid
    double corrected_score = 0.0;
};

/// Correction rule: scores inside the band [0.5-tau, 0.5+tau] are pushed by
/// delta toward fake when neither detector finds a face, toward real when a
/// Haar box contains the landmark centroid, and left alone on mixed evidence.
/// The push is weighted by the triangular window w(s) = max(0, 1-|s-0.5|/tau),
/// which keeps the correction monotone in s whenever |delta| <= tau.
struct CorrectionPolicy {
    double tau = 0.15;
    double delta = 0.10;
};

void validate_policy(const CorrectionPolicy& policy);

enum class Evidence { toward_fake, toward_real, neutral };

const char* evidence_name(Evidence e);

Evidence evidence_for(const ScoreRecord& rec);

double correct_score(const ScoreRecord& rec, const CorrectionPolicy& policy);

struct CorrectionSummary {
    long raised = 0;
    long lowered = 0;
    long untouched = 0;
    long missing_evidence = 0; ///< rows with no detection/landmark record
};

struct BatchCorrectionResult {
    std::vector<ScoreRecord> rows; ///< input order preserved
    CorrectionSummary summary;
};

/// Join raw scores with the detection report and landmark sidecars, then
/// correct row by row. Missing evidence is treated as "no face seen by that
/// detector" and counted in the summary. Duplicate image ids in the input
/// are a ValidationError.
BatchCorrectionResult
batch_correct(const std::vector<std::pair<std::string, double>>& scores,
              const std::map<std::string, std::vector<Detection>>& detections,
              const std::map<std::string, LandmarkSet>& landmarks,
              const CorrectionPolicy& policy);

} // namespace forgery
