#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pda/core.hpp"

namespace pda {

struct CriterionSpec;

/// (a_d - b_d)^2 on one feature.
struct SquaredDiffDim {
    std::size_t dim = 0;
};

/// |a_d - b_d| on one feature.
struct AbsDiffDim {
    std::size_t dim = 0;
};

/// Sum of squared differences over a set of features (all when empty).
struct SquaredEuclidean {
    std::vector<std::size_t> dims;
};

/// Squared Euclidean distance between normalized histograms of the
/// instantaneous speeds of two trajectories. Without a range, the range is
/// fixed to [0, max training speed] when the criterion is resolved.
struct SpeedHistogram {
    std::size_t bins = 10;
    std::optional<std::pair<double, double>> range;
};

/// Sum of squared distances between arclength-uniform resamplings.
struct ShapeResample {
    std::size_t points = 100;
};

/// Nonnegative linear combination of child criteria.
struct WeightedCombo {
    std::vector<double> weights;
    std::vector<CriterionSpec> children;
};

struct CriterionSpec {
    std::variant<SquaredDiffDim, AbsDiffDim, SquaredEuclidean, SpeedHistogram, ShapeResample,
                 WeightedCombo>
        kind;
};

/// Short stable label, e.g. "squared_diff_dim(2)".
std::string criterion_id(const CriterionSpec& spec);

/// Checks parameter invariants and that the criterion fits every sample.
/// Throws ConfigError.
void validate_criterion(const CriterionSpec& spec, const Dataset& data);

/// Fixes data-dependent defaults (speed histogram range) from training data.
CriterionSpec resolve_criterion(const CriterionSpec& spec, const Dataset& training);

/// Dissimilarity between two samples. The criterion must be resolved.
double dissimilarity(const CriterionSpec& spec, const Sample& a, const Sample& b);

/// Full matrix over a dataset; resolves and validates the criterion first.
DissimMatrix pairwise_dissimilarities(const Dataset& data, const CriterionSpec& spec);

/// Dissimilarities between x and every sample of `data`.
std::vector<double> dissimilarities_to(const Dataset& data, const CriterionSpec& spec,
                                       const Sample& x);

/// One criterion per feature: squared_diff_dim(0..m-1).
std::vector<CriterionSpec> per_dimension_squared_diffs(std::size_t m);

// ---- Elementary measures ----------------------------------------------------

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Ordered positions; features of a trajectory sample are x0,y0,x1,y1,...
struct Trajectory {
    std::vector<Point2> positions;
};

/// Throws ConfigError if the feature count is odd or fewer than 2 positions.
Trajectory trajectory_from_features(std::span<const double> features);
std::vector<double> trajectory_to_features(const Trajectory& t);

double squared_diff_dim(const Sample& a, const Sample& b, std::size_t dim);

/// Finite-difference speeds |p_t - p_{t-1}|, length l - 1.
std::vector<double> trajectory_speeds(const Trajectory& t);

/// Unit-mass histogram over [lo, hi]; values outside clamp to the end bins.
std::vector<double> speed_histogram(const Trajectory& t, std::size_t bins, double lo, double hi);

double speed_histogram_dissim(const Trajectory& a, const Trajectory& b, std::size_t bins,
                              double lo, double hi);

/// `count` points spaced uniformly in arclength, endpoints included.
std::vector<Point2> resample_by_arclength(const Trajectory& t, std::size_t count);

double shape_dissim(const Trajectory& a, const Trajectory& b, std::size_t count);

/// sum_l weights[l] * values[l]. Throws UsageError on length mismatch,
/// negative weights, or all-zero weights.
double weighted_combo(std::span<const double> values, std::span<const double> weights);

}  // namespace pda
