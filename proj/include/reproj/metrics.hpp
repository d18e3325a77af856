#pragma once

#include <string>

#include "reproj/buffers.hpp"

namespace reproj {

/// The seven standard depth-evaluation numbers: four error metrics (lower is
/// better) and three delta-threshold accuracies (higher is better).
struct DepthMetrics {
    double abs_rel = 0.0;
    double sq_rel = 0.0;
    double rmse = 0.0;
    double rmse_log = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

inline constexpr double kDefaultDepthCap = 80.0;
/// Predictions are floored here before the log in rmse_log.
inline constexpr double kLogDepthFloor = 1e-3;

/// Metrics over pixels where valid is set, gt > 0 and gt <= cap.
/// delta = max(pred/gt, gt/pred); a_i is the fraction with delta < 1.25^i
/// (strict). Throws InvalidInputError on an empty valid set or nonpositive
/// predictions.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt, const BinaryMask& valid,
                           double cap = kDefaultDepthCap);

/// median(gt) / median(pred) over the valid set (even counts average the
/// middle pair). Throws InvalidInputError when median(pred) is 0 or the valid
/// set is empty.
double median_scaling(const DepthMap& pred, const DepthMap& gt, const BinaryMask& valid);

/// Aligned plain-text table in the standard column order.
std::string metrics_table(const DepthMetrics& m);

}  // namespace reproj
