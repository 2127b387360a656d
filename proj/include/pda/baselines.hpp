#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pda/core.hpp"
#include "pda/neighbors.hpp"

namespace pda {

enum class BaselineMethod { knn_dist, knn_sum, lof, klpe };

inline constexpr BaselineMethod kAllBaselines[] = {BaselineMethod::knn_dist, BaselineMethod::knn_sum,
                                                   BaselineMethod::lof, BaselineMethod::klpe};

std::string_view to_string(BaselineMethod method);
/// Accepts "knn_dist", "knn_sum", "lof", "klpe"; throws UsageError otherwise.
BaselineMethod parse_baseline_method(std::string_view name);

struct BaselineSpec {
    BaselineMethod method = BaselineMethod::knn_dist;
    std::size_t k = 1;
    std::vector<double> weights;
};

/// Box grid {0, 1/(p-1), ..., 1}^K in odometer order (last axis fastest)
/// without the all-zero vector: p^K - 1 weight vectors.
std::vector<std::vector<double>> grid_weights(std::size_t criteria, std::size_t points_per_axis);

/// Elementwise sum_l w_l * matrices[l]. Throws UsageError on bad weights.
DissimMatrix scalarize(std::span<const DissimMatrix> matrices, std::span<const double> weights);

/// sum_l w_l * dists[l][j] for every j.
std::vector<double> scalarize(std::span<const std::vector<double>> dists,
                              std::span<const double> weights);

/// Training-side state for the single-criterion nearest-neighbor scores on
/// one scalarized dissimilarity: k-distances and local reachability terms.
/// Neighbor ties are broken by ascending training index.
class BaselineReference {
public:
    /// Throws UsageError unless 1 <= k < n.
    BaselineReference(const DissimMatrix& matrix, std::size_t k);
    /// Reuses neighbor lists already computed for the same matrix.
    BaselineReference(NeighborTable& table, std::size_t k);

    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    /// Dissimilarity to the k-th nearest training sample.
    [[nodiscard]] double knn_dist(std::span<const double> x_dists) const;
    /// Sum of dissimilarities to the k nearest training samples.
    [[nodiscard]] double knn_sum(std::span<const double> x_dists) const;
    /// Local outlier factor with reachability distances of the same k.
    [[nodiscard]] double lof(std::span<const double> x_dists) const;
    /// Fraction of training samples whose own (leave-self-out) k-NN
    /// dissimilarity is <= the test sample's; higher is more anomalous.
    [[nodiscard]] double klpe(std::span<const double> x_dists) const;

    [[nodiscard]] double score(BaselineMethod method, std::span<const double> x_dists) const;

    /// All four scores, indexed like kAllBaselines, from one neighbor search.
    [[nodiscard]] std::array<double, 4> scores(std::span<const double> x_dists) const;

private:
    void build(NeighborTable& table, const DissimMatrix& matrix);
    void check(std::span<const double> x_dists) const;
    [[nodiscard]] double lof_from(std::span<const double> x_dists,
                                  std::span<const std::uint32_t> nn) const;
    [[nodiscard]] double klpe_from(double own_kth) const;

    std::size_t n_;
    std::size_t k_;
    std::vector<std::vector<std::uint32_t>> neighbors_;
    std::vector<double> kth_distance_;
    std::vector<double> mean_reach_;
    std::vector<double> sorted_kth_distance_;
};

double knn_dist_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k);
double knn_sum_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k);
double lof_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k);
double klpe_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k);

}  // namespace pda
