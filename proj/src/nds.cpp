#include "pda/nds.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "pda/errors.hpp"

namespace pda {

namespace {

std::vector<std::uint32_t> iota_indices(std::size_t n) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0U);
    return idx;
}

/// Lexicographic order on coordinates, ties by index. Any dominator of a
/// point precedes it in this order.
std::vector<std::uint32_t> lexicographic_order(const PointSet& points) {
    auto order = iota_indices(points.size());
    const std::size_t dim = points.dim();
    const double* v = points.values().data();
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double* pa = v + std::size_t{a} * dim;
        const double* pb = v + std::size_t{b} * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            if (pa[c] != pb[c]) return pa[c] < pb[c];
        }
        return a < b;
    });
    return order;
}

void require_points(const PointSet& points, const char* who) {
    if (points.empty()) throw UsageError(std::string(who) + ": empty point set");
    if (points.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw UsageError(std::string(who) + ": too many points");
    }
}

std::vector<std::uint32_t> deb_depths(const PointSet& points) {
    const std::size_t n = points.size();
    const std::size_t dim = points.dim();
    const double* v = points.values().data();

    std::vector<std::uint32_t> dominated_by_count(n, 0);
    std::vector<std::vector<std::uint32_t>> dominates(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double* pp = v + p * dim;
        for (std::size_t q = p + 1; q < n; ++q) {
            const double* qq = v + q * dim;
            if (dominates_unchecked(pp, qq, dim)) {
                dominates[p].push_back(static_cast<std::uint32_t>(q));
                ++dominated_by_count[q];
            } else if (dominates_unchecked(qq, pp, dim)) {
                dominates[q].push_back(static_cast<std::uint32_t>(p));
                ++dominated_by_count[p];
            }
        }
    }

    std::vector<std::uint32_t> depth(n, 0);
    std::vector<std::uint32_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        if (dominated_by_count[p] == 0) current.push_back(static_cast<std::uint32_t>(p));
    }
    std::uint32_t level = 1;
    std::vector<std::uint32_t> next;
    while (!current.empty()) {
        next.clear();
        for (auto p : current) {
            depth[p] = level;
            for (auto q : dominates[p]) {
                if (--dominated_by_count[q] == 0) next.push_back(q);
            }
        }
        current.swap(next);
        ++level;
    }
    return depth;
}

std::vector<std::uint32_t> low_memory_depths(const PointSet& points) {
    const std::size_t n = points.size();
    const std::size_t dim = points.dim();
    const double* v = points.values().data();
    const auto order = lexicographic_order(points);

    std::vector<std::uint32_t> depth(n, 0);
    std::vector<std::vector<std::uint32_t>> fronts;

    // Members are scanned newest first: in lexicographic order the latest
    // additions are the likeliest dominators of the incoming point.
    auto front_dominates = [&](std::size_t f, const double* p) {
        const auto& members = fronts[f];
        for (auto it = members.rbegin(); it != members.rend(); ++it) {
            if (dominates_unchecked(v + std::size_t{*it} * dim, p, dim)) return true;
        }
        return false;
    };

    for (const auto idx : order) {
        const double* p = v + std::size_t{idx} * dim;
        // "Some member of F_f dominates p" holds on a prefix of fronts.
        std::size_t lo = 0;
        std::size_t hi = fronts.size();
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (front_dominates(mid, p)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == fronts.size()) fronts.emplace_back();
        fronts[lo].push_back(idx);
        depth[idx] = static_cast<std::uint32_t>(lo + 1);
    }
    return depth;
}

}  // namespace

FrontAssignment make_front_assignment(const PointSet& points, std::vector<std::uint32_t> depth_of) {
    if (depth_of.size() != points.size()) {
        throw UsageError("depth map size does not match the point count");
    }
    FrontAssignment out;
    std::uint32_t max_depth = 0;
    for (auto d : depth_of) {
        if (d == 0) throw UsageError("front depths are 1-based");
        max_depth = std::max(max_depth, d);
    }
    out.fronts.resize(max_depth);
    for (std::size_t p = 0; p < depth_of.size(); ++p) {
        out.fronts[depth_of[p] - 1].push_back(static_cast<std::uint32_t>(p));
    }
    for (const auto& f : out.fronts) {
        if (f.empty()) throw UsageError("depth map skips a front index");
    }
    if (points.dim() == 2) {
        for (auto& f : out.fronts) {
            std::sort(f.begin(), f.end(), [&](std::uint32_t a, std::uint32_t b) {
                const double ax = points.at(a, 0), bx = points.at(b, 0);
                if (ax != bx) return ax < bx;
                const double ay = points.at(a, 1), by = points.at(b, 1);
                if (ay != by) return ay < by;
                return a < b;
            });
        }
    }
    out.depth_of = std::move(depth_of);
    return out;
}

FrontAssignment nds_general(const PointSet& points, const NdsOptions& options) {
    require_points(points, "nds_general");
    auto strategy = options.strategy;
    if (strategy == GeneralSortStrategy::automatic) {
        strategy = points.size() <= options.deb_max_points ? GeneralSortStrategy::deb
                                                           : GeneralSortStrategy::low_memory;
    }
    auto depth = strategy == GeneralSortStrategy::deb ? deb_depths(points) : low_memory_depths(points);
    return make_front_assignment(points, std::move(depth));
}

FrontAssignment nds_fast_2d(const PointSet& points) {
    if (points.dim() != 2) {
        throw UsageError("nds_fast_2d needs exactly 2 criteria, got " + std::to_string(points.dim()));
    }
    require_points(points, "nds_fast_2d");
    const auto order = lexicographic_order(points);

    // Coordinates travel with the index so each pass is a sequential scan.
    struct Item {
        double x;
        double y;
        std::uint32_t idx;
    };
    std::vector<Item> remaining;
    remaining.reserve(order.size());
    for (auto idx : order) remaining.push_back({points.at(idx, 0), points.at(idx, 1), idx});

    std::vector<std::uint32_t> depth(points.size(), 0);
    std::uint32_t level = 1;
    while (!remaining.empty()) {
        Item last = remaining.front();
        depth[last.idx] = level;
        std::size_t kept = 0;
        for (std::size_t r = 1; r < remaining.size(); ++r) {
            const Item it = remaining[r];
            // A criterion-2 tie joins the front only as an exact duplicate;
            // otherwise the last member has smaller criterion 1 and dominates.
            if (it.y < last.y || (it.y == last.y && it.x == last.x)) {
                depth[it.idx] = level;
                last = it;
            } else {
                remaining[kept++] = it;
            }
        }
        remaining.resize(kept);
        ++level;
    }
    return make_front_assignment(points, std::move(depth));
}

FrontAssignment non_dominated_sort(const PointSet& points, const NdsOptions& options) {
    return points.dim() == 2 ? nds_fast_2d(points) : nds_general(points, options);
}

std::vector<std::uint32_t> first_front(const PointSet& points) {
    require_points(points, "first_front");
    const std::size_t dim = points.dim();
    const double* v = points.values().data();
    const auto order = lexicographic_order(points);

    std::vector<std::uint32_t> front;
    if (dim == 2) {
        double last_x = 0.0;
        double last_y = std::numeric_limits<double>::infinity();
        for (const auto idx : order) {
            const double x = points.at(idx, 0);
            const double y = points.at(idx, 1);
            if (y < last_y || (y == last_y && x == last_x)) {
                front.push_back(idx);
                last_x = x;
                last_y = y;
            }
        }
    } else {
        for (const auto idx : order) {
            const double* p = v + std::size_t{idx} * dim;
            bool dominated = false;
            for (auto it = front.rbegin(); it != front.rend() && !dominated; ++it) {
                dominated = dominates_unchecked(v + std::size_t{*it} * dim, p, dim);
            }
            if (!dominated) front.push_back(idx);
        }
    }
    std::sort(front.begin(), front.end());
    return front;
}

}  // namespace pda
