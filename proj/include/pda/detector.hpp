#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pda/core.hpp"
#include "pda/dissim.hpp"
#include "pda/nds.hpp"

namespace pda {

/// How the depth of a new dyad is located among the training fronts.
enum class DepthRule {
    /// Smallest l such that the dyad strictly dominates a member of F_l,
    /// found by scanning fronts in order. M + 1 if it dominates nothing.
    below_scan,
    /// Same predicate located by bisection over fronts. Only exact when the
    /// predicate happens to be monotone in l; an opt-in approximation.
    below_bisect,
    /// Smallest l such that no member of F_l dominates the dyad (the front it
    /// would join if inserted). Monotone in l, located by bisection.
    insertion,
};

struct TrainOptions {
    /// Per-criterion neighbor counts; selected by k-NN graph connectivity
    /// when absent.
    std::optional<std::vector<std::size_t>> k_override;
    NdsOptions sort;
};

/// Trained detector: training samples, resolved criteria, their dissimilarity
/// matrices, all training dyads sorted into Pareto fronts, and k_1..k_K.
class PdaModel {
public:
    /// Assembles a model from stored parts; recomputes dyads and validates
    /// that `depth_of` is a front partition of them.
    PdaModel(Dataset training, std::vector<CriterionSpec> criteria,
             std::vector<DissimMatrix> matrices, std::vector<std::size_t> k,
             FrontAssignment fronts);

    [[nodiscard]] const Dataset& training() const noexcept { return training_; }
    [[nodiscard]] const std::vector<CriterionSpec>& criteria() const noexcept { return criteria_; }
    [[nodiscard]] const std::vector<DissimMatrix>& matrices() const noexcept { return matrices_; }
    [[nodiscard]] const DyadSet& dyads() const noexcept { return dyads_; }
    [[nodiscard]] const FrontAssignment& fronts() const noexcept { return fronts_; }
    [[nodiscard]] const std::vector<std::size_t>& k() const noexcept { return k_; }
    [[nodiscard]] std::size_t criteria_count() const noexcept { return criteria_.size(); }
    /// M, the deepest front index.
    [[nodiscard]] std::size_t front_count() const noexcept { return fronts_.front_count(); }

    /// Depth in [1, M + 1] of a K-vector under the given rule.
    [[nodiscard]] std::uint32_t depth(std::span<const double> values,
                                      DepthRule rule = DepthRule::below_scan) const;

    /// Whether `values` strictly dominates some member of front `f` (0-based).
    [[nodiscard]] bool is_below(std::size_t f, std::span<const double> values) const;
    /// Whether some member of front `f` (0-based) strictly dominates `values`.
    [[nodiscard]] bool is_dominated_by(std::size_t f, std::span<const double> values) const;

private:
    void index_fronts();

    Dataset training_;
    std::vector<CriterionSpec> criteria_;
    std::vector<DissimMatrix> matrices_;
    DyadSet dyads_;
    FrontAssignment fronts_;
    std::vector<std::size_t> k_;

    // Front members copied contiguously (canonical order) with per-front
    // coordinate bounds for quick rejection.
    std::vector<std::size_t> front_offset_;
    std::vector<double> front_values_;
    std::vector<double> front_max_;
    std::vector<double> front_min_;
};

/// Training phase: per-criterion matrices, dyads, fronts, and k selection.
/// Throws UsageError if fewer than 3 samples or no criteria.
PdaModel train(const Dataset& training, const std::vector<CriterionSpec>& criteria,
               const TrainOptions& options = {});

/// Which training sample a test dyad connects to, and through which
/// criterion's neighbor list it was selected.
struct NeighborLink {
    std::size_t criterion = 0;
    std::size_t training_index = 0;

    bool operator==(const NeighborLink&) const = default;
};

struct TestDyads {
    std::vector<Dyad> dyads;
    std::vector<NeighborLink> links;
};

/// s = sum k_l dyads between x and its k_l nearest training samples under
/// each criterion l. A training sample selected by several criteria yields
/// one copy per selection. Throws ConfigError if x does not fit a criterion.
TestDyads make_test_dyads(const PdaModel& model, const Sample& x);

/// Depth of one dyad; throws UsageError on a length mismatch.
std::uint32_t dyad_depth(const PdaModel& model, const Dyad& dyad,
                         DepthRule rule = DepthRule::below_scan);

struct ScoreReport {
    double score = 0.0;
    std::vector<std::uint32_t> depths;
    std::vector<NeighborLink> neighbors;
    /// score > threshold, when a threshold was given.
    std::optional<bool> is_anomaly;
};

/// Mean of the depths; throws UsageError when empty.
double mean_depth(std::span<const std::uint32_t> depths);

ScoreReport score(const PdaModel& model, const Sample& x,
                  std::optional<double> threshold = std::nullopt,
                  DepthRule rule = DepthRule::below_scan);

}  // namespace pda
