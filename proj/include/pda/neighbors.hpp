#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "pda/core.hpp"

namespace pda {

/// Disjoint-set forest with union by size and path halving.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true if x and y were in different sets.
    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (size_[x] < size_[y]) std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        --components_;
        return true;
    }

    [[nodiscard]] std::size_t components() const noexcept { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

/// The k smallest entries of `dists` as indices, ordered by (distance, index).
/// `exclude` (e.g. the query itself) is skipped. Requires k <= candidates.
std::vector<std::uint32_t> nearest_indices(std::span<const double> dists, std::size_t k,
                                           std::size_t exclude = kTestSample);

/// Per-sample neighbor lists of a training matrix (self excluded), ordered by
/// (dissimilarity, index). Lists are materialized to a prefix and grown on
/// demand.
class NeighborTable {
public:
    explicit NeighborTable(const DissimMatrix& matrix, std::size_t initial_depth = 16);

    [[nodiscard]] std::size_t size() const noexcept { return matrix_->size(); }
    [[nodiscard]] const DissimMatrix& matrix() const noexcept { return *matrix_; }

    /// First k neighbors of sample i; 1 <= k <= n - 1.
    std::span<const std::uint32_t> neighbors(std::size_t i, std::size_t k);

    /// Dissimilarity from i to its k-th neighbor.
    double kth_distance(std::size_t i, std::size_t k);

private:
    void ensure_depth(std::size_t k);

    const DissimMatrix* matrix_;
    std::size_t depth_ = 0;
    std::vector<std::uint32_t> order_;  // n rows of depth_ entries
};

/// Smallest k >= 1 whose symmetric k-NN graph (i ~ j if either is among the
/// other's k nearest) is connected. Throws UsageError if n < 2.
std::size_t select_k(const DissimMatrix& matrix);
std::size_t select_k(NeighborTable& table);

}  // namespace pda
