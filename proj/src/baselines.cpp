#include "pda/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pda/errors.hpp"
#include "pda/neighbors.hpp"

namespace pda {

namespace {

void check_weights(std::span<const double> weights, std::size_t expected) {
    if (weights.size() != expected) {
        throw UsageError("got " + std::to_string(weights.size()) + " weights for " +
                         std::to_string(expected) + " criteria");
    }
    bool any_positive = false;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw UsageError("weights must be finite and nonnegative");
        any_positive |= w > 0.0;
    }
    if (!any_positive) throw UsageError("weights are all zero");
}

/// a / b for nonnegative a, b with 0/0 = 1 and a/0 = inf.
double ratio(double a, double b) {
    if (b > 0.0) return a / b;
    return a > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

}  // namespace

std::string_view to_string(BaselineMethod method) {
    switch (method) {
        case BaselineMethod::knn_dist: return "knn_dist";
        case BaselineMethod::knn_sum: return "knn_sum";
        case BaselineMethod::lof: return "lof";
        case BaselineMethod::klpe: return "klpe";
    }
    return "unknown";
}

BaselineMethod parse_baseline_method(std::string_view name) {
    for (auto m : kAllBaselines) {
        if (to_string(m) == name) return m;
    }
    throw UsageError("unknown baseline method '" + std::string(name) +
                     "' (expected knn_dist, knn_sum, lof or klpe)");
}

std::vector<std::vector<double>> grid_weights(std::size_t criteria, std::size_t points_per_axis) {
    if (criteria < 1) throw UsageError("weight grid needs at least one criterion");
    if (points_per_axis < 2) throw UsageError("weight grid needs at least 2 points per axis");
    std::vector<double> axis(points_per_axis);
    for (std::size_t i = 0; i < points_per_axis; ++i) {
        axis[i] = static_cast<double>(i) / static_cast<double>(points_per_axis - 1);
    }
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> digit(criteria, 0);
    while (true) {
        bool nonzero = false;
        std::vector<double> w(criteria);
        for (std::size_t c = 0; c < criteria; ++c) {
            w[c] = axis[digit[c]];
            nonzero |= digit[c] != 0;
        }
        if (nonzero) out.push_back(std::move(w));
        std::size_t c = criteria;
        while (c > 0 && ++digit[c - 1] == points_per_axis) digit[--c] = 0;
        if (c == 0) break;
    }
    return out;
}

DissimMatrix scalarize(std::span<const DissimMatrix> matrices, std::span<const double> weights) {
    if (matrices.empty()) throw UsageError("scalarize needs at least one matrix");
    check_weights(weights, matrices.size());
    const std::size_t n = matrices.front().size();
    for (const auto& m : matrices) {
        if (m.size() != n) throw UsageError("scalarize: matrices differ in size");
    }
    std::vector<double> combined(n * n, 0.0);
    for (std::size_t l = 0; l < matrices.size(); ++l) {
        if (weights[l] == 0.0) continue;
        const auto e = matrices[l].entries();
        for (std::size_t i = 0; i < combined.size(); ++i) combined[i] += weights[l] * e[i];
    }
    return DissimMatrix(n, std::move(combined), "scalarized");
}

std::vector<double> scalarize(std::span<const std::vector<double>> dists,
                              std::span<const double> weights) {
    if (dists.empty()) throw UsageError("scalarize needs at least one criterion");
    check_weights(weights, dists.size());
    std::vector<double> out(dists.front().size(), 0.0);
    for (std::size_t l = 0; l < dists.size(); ++l) {
        if (dists[l].size() != out.size()) throw UsageError("scalarize: rows differ in length");
        if (weights[l] == 0.0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += weights[l] * dists[l][j];
    }
    return out;
}

BaselineReference::BaselineReference(const DissimMatrix& matrix, std::size_t k)
    : n_(matrix.size()), k_(k) {
    if (n_ < 2) throw UsageError("baseline needs at least 2 training samples");
    NeighborTable table(matrix, k_);
    build(table, matrix);
}

BaselineReference::BaselineReference(NeighborTable& table, std::size_t k)
    : n_(table.size()), k_(k) {
    build(table, table.matrix());
}

void BaselineReference::build(NeighborTable& table, const DissimMatrix& matrix) {
    const std::size_t n = n_;
    if (k_ < 1 || k_ >= n) {
        throw UsageError("baseline k = " + std::to_string(k_) + " needs 1 <= k < N = " +
                         std::to_string(n));
    }
    neighbors_.reserve(n);
    kth_distance_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto nn = table.neighbors(i, k_);
        neighbors_.emplace_back(nn.begin(), nn.end());
        kth_distance_[i] = matrix(i, nn.back());
    }
    mean_reach_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (auto p : neighbors_[i]) sum += std::max(kth_distance_[p], matrix(i, p));
        mean_reach_[i] = sum / static_cast<double>(k_);
    }
    sorted_kth_distance_ = kth_distance_;
    std::sort(sorted_kth_distance_.begin(), sorted_kth_distance_.end());
}

void BaselineReference::check(std::span<const double> x_dists) const {
    if (x_dists.size() != n_) {
        throw UsageError("test sample has " + std::to_string(x_dists.size()) +
                         " dissimilarities, training set has " + std::to_string(n_));
    }
}

double BaselineReference::knn_dist(std::span<const double> x_dists) const {
    check(x_dists);
    return x_dists[nearest_indices(x_dists, k_).back()];
}

double BaselineReference::knn_sum(std::span<const double> x_dists) const {
    check(x_dists);
    double sum = 0.0;
    for (auto j : nearest_indices(x_dists, k_)) sum += x_dists[j];
    return sum;
}

double BaselineReference::lof(std::span<const double> x_dists) const {
    check(x_dists);
    return lof_from(x_dists, nearest_indices(x_dists, k_));
}

double BaselineReference::lof_from(std::span<const double> x_dists,
                                   std::span<const std::uint32_t> nn) const {
    double reach = 0.0;
    for (auto p : nn) reach += std::max(kth_distance_[p], x_dists[p]);
    const double mean_reach = reach / static_cast<double>(k_);
    // lrd = 1 / mean reach distance, so lrd(p) / lrd(x) = reach(x) / reach(p).
    double sum = 0.0;
    for (auto p : nn) sum += ratio(mean_reach, mean_reach_[p]);
    return sum / static_cast<double>(k_);
}

double BaselineReference::klpe(std::span<const double> x_dists) const {
    return klpe_from(knn_dist(x_dists));
}

double BaselineReference::klpe_from(double own) const {
    const auto at_most = std::upper_bound(sorted_kth_distance_.begin(), sorted_kth_distance_.end(), own);
    return static_cast<double>(at_most - sorted_kth_distance_.begin()) /
           static_cast<double>(sorted_kth_distance_.size());
}

double BaselineReference::score(BaselineMethod method, std::span<const double> x_dists) const {
    switch (method) {
        case BaselineMethod::knn_dist: return knn_dist(x_dists);
        case BaselineMethod::knn_sum: return knn_sum(x_dists);
        case BaselineMethod::lof: return lof(x_dists);
        case BaselineMethod::klpe: return klpe(x_dists);
    }
    throw UsageError("unknown baseline method");
}

std::array<double, 4> BaselineReference::scores(std::span<const double> x_dists) const {
    check(x_dists);
    const auto nn = nearest_indices(x_dists, k_);
    const double kth = x_dists[nn.back()];
    double sum = 0.0;
    for (auto j : nn) sum += x_dists[j];
    return {kth, sum, lof_from(x_dists, nn), klpe_from(kth)};
}

double knn_dist_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k) {
    return BaselineReference(train, k).knn_dist(x_dists);
}

double knn_sum_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k) {
    return BaselineReference(train, k).knn_sum(x_dists);
}

double lof_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k) {
    return BaselineReference(train, k).lof(x_dists);
}

double klpe_score(const DissimMatrix& train, std::span<const double> x_dists, std::size_t k) {
    return BaselineReference(train, k).klpe(x_dists);
}

}  // namespace pda
