#include "pda/neighbors.hpp"

#include <algorithm>
#include <string>

#include "pda/errors.hpp"

namespace pda {

std::vector<std::uint32_t> nearest_indices(std::span<const double> dists, std::size_t k,
                                           std::size_t exclude) {
    const std::size_t candidates = dists.size() - (exclude < dists.size() ? 1 : 0);
    if (k > candidates) {
        throw UsageError("requested " + std::to_string(k) + " neighbors from " +
                         std::to_string(candidates) + " candidates");
    }
    if (k == 0) return {};

    if (k * 8 <= candidates) {
        // Bounded insertion: `best` stays sorted by (distance, index). Indices
        // arrive in increasing order, so an equal distance never displaces.
        std::vector<std::pair<double, std::uint32_t>> best;
        best.reserve(k + 1);
        for (std::size_t j = 0; j < dists.size(); ++j) {
            if (j == exclude) continue;
            const double d = dists[j];
            if (best.size() == k && !(d < best.back().first)) continue;
            auto pos = std::upper_bound(best.begin(), best.end(), d,
                                        [](double v, const auto& e) { return v < e.first; });
            best.insert(pos, {d, static_cast<std::uint32_t>(j)});
            if (best.size() > k) best.pop_back();
        }
        std::vector<std::uint32_t> out(k);
        for (std::size_t r = 0; r < k; ++r) out[r] = best[r].second;
        return out;
    }

    std::vector<std::uint32_t> idx;
    idx.reserve(candidates);
    for (std::size_t j = 0; j < dists.size(); ++j) {
        if (j != exclude) idx.push_back(static_cast<std::uint32_t>(j));
    }
    auto closer = [&](std::uint32_t a, std::uint32_t b) {
        return dists[a] != dists[b] ? dists[a] < dists[b] : a < b;
    };
    const auto kth = idx.begin() + static_cast<std::ptrdiff_t>(k);
    if (k < idx.size()) std::nth_element(idx.begin(), kth, idx.end(), closer);
    idx.resize(k);
    std::sort(idx.begin(), idx.end(), closer);
    return idx;
}

NeighborTable::NeighborTable(const DissimMatrix& matrix, std::size_t initial_depth)
    : matrix_(&matrix) {
    if (matrix.size() < 2) throw UsageError("neighbor table needs at least 2 samples");
    ensure_depth(std::max<std::size_t>(1, initial_depth));
}

void NeighborTable::ensure_depth(std::size_t k) {
    const std::size_t n = matrix_->size();
    k = std::min(k, n - 1);
    if (k <= depth_) return;
    // Grow geometrically so repeated requests stay amortized.
    const std::size_t depth = std::min(n - 1, std::max(k, 2 * depth_));
    std::vector<std::uint32_t> order(n * depth);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = nearest_indices(matrix_->row(i), depth, i);
        std::copy(row.begin(), row.end(), order.begin() + static_cast<std::ptrdiff_t>(i * depth));
    }
    order_ = std::move(order);
    depth_ = depth;
}

std::span<const std::uint32_t> NeighborTable::neighbors(std::size_t i, std::size_t k) {
    if (k < 1 || k >= size()) {
        throw UsageError("neighbor count " + std::to_string(k) + " outside [1, " +
                         std::to_string(size() - 1) + "]");
    }
    ensure_depth(k);
    return {order_.data() + i * depth_, k};
}

double NeighborTable::kth_distance(std::size_t i, std::size_t k) {
    return (*matrix_)(i, neighbors(i, k)[k - 1]);
}

std::size_t select_k(NeighborTable& table) {
    const std::size_t n = table.size();
    UnionFind components(n);
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            components.unite(i, table.neighbors(i, k)[k - 1]);
        }
        if (components.components() == 1) return k;
    }
    return n - 1;  // unreachable: the (n-1)-NN graph is complete
}

std::size_t select_k(const DissimMatrix& matrix) {
    if (matrix.size() < 2) throw UsageError("select_k needs at least 2 samples");
    NeighborTable table(matrix);
    return select_k(table);
}

}  // namespace pda
