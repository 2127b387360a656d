#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pda/core.hpp"

namespace pda {

/// Points of a 2-D first front that minimize a1*x + a2*y for some strictly
/// positive (a1, a2): the lower-left convex hull chain of the front, with
/// points lying exactly on a hull edge (tied minimizers) included. Returns
/// ascending indices into `front`. Throws UsageError if the input is empty,
/// not 2-D, or not mutually non-dominated.
std::vector<std::uint32_t> scalarization_set(const PointSet& front);

/// How dyads (or points) are generated from uniform samples on [0,1]^2.
enum class TheoryDomain {
    /// Dyads with criteria |dx| and |dy|: the box domain.
    box,
    /// Dyads with criteria |dx| + |dy| and |dx| - |dy|: the diamond domain.
    diamond,
    /// No dyads: the samples themselves, i.i.d. uniform on the box.
    iid_box,
};

std::string_view to_string(TheoryDomain domain);
TheoryDomain parse_theory_domain(std::string_view name);

/// Least-squares fit of a growth law to sample means.
struct GrowthFit {
    /// "alpha*ln(n)" or "alpha*n^beta".
    std::string model;
    double alpha = 0.0;
    double beta = 0.0;
    /// Coefficients of the underlying linear regression y' = intercept + slope * ln n.
    double intercept = 0.0;
    double slope = 0.0;
    /// Root-mean-square residual of that regression.
    double rms_residual = 0.0;
};

struct OlsLine {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs 2+ distinct x.
OlsLine ordinary_least_squares(std::span<const double> x, std::span<const double> y);

/// alpha from regressing y / ln n on ln n, evaluated over the grid: alpha is
/// the fitted y / ln n at the mean ln n (equal to the mean of y / ln n).
GrowthFit fit_log_growth(std::span<const double> n, std::span<const double> y);

/// ln y = ln alpha + beta ln n.
GrowthFit fit_power_growth(std::span<const double> n, std::span<const double> y);

struct TheoryConfig {
    TheoryDomain domain = TheoryDomain::box;
    /// Point counts per grid step (nested prefixes of one draw per trial).
    /// For dyad domains n = C(N, 2); for iid_box n = N.
    std::vector<std::size_t> sample_counts;
    std::size_t trials = 50;
    std::uint64_t seed = 7;
    std::size_t threads = 0;
};

/// Sample counts whose item counts n (C(N,2) for dyad domains) are roughly
/// log-spaced between n_min and n_max, `points` steps, deduplicated.
std::vector<std::size_t> sample_counts_for(TheoryDomain domain, double n_min, double n_max,
                                           std::size_t points);

struct TheoryRun {
    TheoryDomain domain = TheoryDomain::box;
    std::vector<std::size_t> sample_counts;
    /// Items sorted at each step: dyads for dyad domains, points for iid_box.
    std::vector<std::size_t> n_grid;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> mean_front;
    std::vector<double> mean_scalarizable;
    std::vector<double> mean_unattainable;
    std::vector<double> stderr_front;
    std::vector<double> stderr_unattainable;
    /// mean |F \ L| growth fit: logarithmic for box domains, power law for
    /// the diamond.
    GrowthFit fit;
};

/// Runs the Monte-Carlo experiment. Trial t draws its samples from stream
/// (seed, t); |F|, |L| and |F \ L| are tracked incrementally as the prefix
/// grows through sample_counts.
TheoryRun run_theory_experiment(const TheoryConfig& config);

TheoryRun box_dyad_experiment(std::vector<std::size_t> sample_counts, std::size_t trials,
                              std::uint64_t seed, std::size_t threads = 0);
TheoryRun diamond_dyad_experiment(std::vector<std::size_t> sample_counts, std::size_t trials,
                                  std::uint64_t seed, std::size_t threads = 0);

/// Expected first-front size of n i.i.d. uniform points on [0,1]^2,
/// n * integral over the unit square of (1 - xy)^(n-1). The inner integral is
/// taken in closed form and the outer one by adaptive Gauss-Kronrod
/// quadrature (relative error well below 1e-9).
double uniform_front_size_quadrature(std::size_t n);

}  // namespace pda
