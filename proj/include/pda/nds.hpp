#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pda/core.hpp"

namespace pda {

/// Partition of a point set into Pareto fronts F_1..F_M.
///
/// depth_of[p] is the 1-based front index of point p. Each front lists its
/// members in canonical order: for 2-D points ascending by criterion 1 then
/// criterion 2 (a staircase, criterion 2 non-increasing), otherwise ascending
/// by point index. Every sorting strategy returns the same canonical value.
struct FrontAssignment {
    std::vector<std::uint32_t> depth_of;
    std::vector<std::vector<std::uint32_t>> fronts;

    [[nodiscard]] std::size_t front_count() const noexcept { return fronts.size(); }
    [[nodiscard]] std::size_t point_count() const noexcept { return depth_of.size(); }

    bool operator==(const FrontAssignment&) const = default;
};

enum class GeneralSortStrategy {
    /// Deb bookkeeping up to NdsOptions::deb_max_points, low_memory above.
    automatic,
    /// Domination counts plus dominated lists: O(K n^2) time, O(n^2) memory.
    deb,
    /// Lexicographic sweep assigning each point to the first front holding no
    /// dominator (binary search over fronts): O(K n^2) worst case, O(n) memory.
    low_memory,
};

struct NdsOptions {
    GeneralSortStrategy strategy = GeneralSortStrategy::automatic;
    std::size_t deb_max_points = 5000;
};

/// Non-dominated sort for any dimension. Throws UsageError on empty input.
FrontAssignment nds_general(const PointSet& points, const NdsOptions& options = {});

/// Two-criterion sweep: sort by (c1, c2), then repeatedly peel the staircase
/// of points whose criterion 2 drops below the running minimum. Exact
/// duplicates join the same front. Throws UsageError unless dim == 2.
FrontAssignment nds_fast_2d(const PointSet& points);

/// nds_fast_2d for 2-D input, nds_general otherwise.
FrontAssignment non_dominated_sort(const PointSet& points, const NdsOptions& options = {});

/// Indices (ascending) of the points not strictly dominated by any other.
std::vector<std::uint32_t> first_front(const PointSet& points);

/// Builds the canonical FrontAssignment from a 1-based depth map.
FrontAssignment make_front_assignment(const PointSet& points, std::vector<std::uint32_t> depth_of);

}  // namespace pda
