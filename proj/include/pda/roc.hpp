#pragma once

#include <span>
#include <utility>
#include <vector>

namespace pda {

struct RocResult {
    /// (false-positive rate, true-positive rate) from (0,0) to (1,1), one
    /// vertex per distinct score threshold.
    std::vector<std::pair<double, double>> points;
    /// Trapezoidal area under `points`.
    double auc = 0.0;
};

/// ROC of "anomalous scores are higher". The trapezoid area equals
/// P(anomalous > nominal) + P(tie) / 2; counts are accumulated in integers.
/// Throws UsageError if either list is empty.
RocResult auc(std::span<const double> scores_nominal, std::span<const double> scores_anomalous);

/// The same quantity via the Mann-Whitney rank-sum statistic with midranks.
double mann_whitney_auc(std::span<const double> scores_nominal,
                        std::span<const double> scores_anomalous);

}  // namespace pda
