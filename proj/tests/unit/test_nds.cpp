#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pda/errors.hpp"
#include "pda/nds.hpp"

using namespace pda;
using oracle::Vec;

namespace {

const std::vector<Vec> kFivePoints{{1, 4}, {2, 2}, {4, 1}, {3, 3}, {5, 5}};

FrontAssignment sort_with(const std::vector<Vec>& pts, GeneralSortStrategy s) {
    return nds_general(oracle::to_point_set(pts), NdsOptions{s, 5000});
}

// Checks every FrontAssignment invariant directly against the points.
void check_invariants(const std::vector<Vec>& pts, const FrontAssignment& fa) {
    REQUIRE(fa.depth_of.size() == pts.size());
    std::vector<int> seen(pts.size(), 0);
    for (std::size_t f = 0; f < fa.fronts.size(); ++f) {
        for (auto a : fa.fronts[f]) {
            ++seen[a];
            CHECK(fa.depth_of[a] == f + 1);
            for (auto b : fa.fronts[f]) CHECK_FALSE(oracle::dominates(pts[a], pts[b]));
            if (f > 0) {
                bool covered = false;
                for (auto p : fa.fronts[f - 1]) covered |= oracle::dominates(pts[p], pts[a]);
                CHECK(covered);
            }
        }
        if (!pts.empty() && pts[0].size() == 2) {
            for (std::size_t i = 1; i < fa.fronts[f].size(); ++i) {
                const auto& prev = pts[fa.fronts[f][i - 1]];
                const auto& cur = pts[fa.fronts[f][i]];
                CHECK(prev[0] <= cur[0]);
                CHECK(prev[1] >= cur[1]);
            }
        }
    }
    for (int s : seen) CHECK(s == 1);
}

}  // namespace

TEST_SUITE("nds") {
    TEST_CASE("five point example") {
        const std::vector<std::uint32_t> expected{1, 1, 1, 2, 3};
        CHECK(oracle::peel_depths(kFivePoints) == expected);
        for (auto s : {GeneralSortStrategy::deb, GeneralSortStrategy::low_memory, GeneralSortStrategy::automatic}) {
            const auto fa = sort_with(kFivePoints, s);
            CHECK(fa.depth_of == expected);
            check_invariants(kFivePoints, fa);
        }
        const auto fast = nds_fast_2d(oracle::to_point_set(kFivePoints));
        CHECK(fast.depth_of == expected);
        CHECK(fast == sort_with(kFivePoints, GeneralSortStrategy::deb));
        // Staircase order: x ascending.
        CHECK(fast.fronts[0] == std::vector<std::uint32_t>{0, 1, 2});
    }

    TEST_CASE("chain, singleton, equal points and staircase") {
        const std::vector<Vec> chain{{3, 3, 3}, {1, 1, 1}, {2, 2, 2}};
        const auto fa = nds_general(oracle::to_point_set(chain));
        CHECK(fa.depth_of == std::vector<std::uint32_t>{3, 1, 2});
        CHECK(fa.front_count() == 3);

        const auto one = nds_general(oracle::to_point_set({{7.0, 1.0}}));
        CHECK(one.front_count() == 1);
        CHECK(one.fronts[0].size() == 1);

        const std::vector<Vec> same(25, Vec{0.5, 0.5});
        CHECK(nds_fast_2d(oracle::to_point_set(same)).front_count() == 1);
        CHECK(nds_general(oracle::to_point_set(same)).front_count() == 1);

        std::vector<Vec> stairs;
        for (int i = 0; i < 40; ++i) stairs.push_back({double(i), double(40 - i)});
        CHECK(nds_fast_2d(oracle::to_point_set(stairs)).front_count() == 1);
        CHECK(nds_general(oracle::to_point_set(stairs)).front_count() == 1);
    }

    TEST_CASE("criterion-1 ties are split by criterion 2") {
        // (1,2) dominates (1,3) although they share criterion 1.
        const std::vector<Vec> tied{{1, 3}, {1, 2}, {1, 2}, {0, 5}, {2, 1}};
        const auto fast = nds_fast_2d(oracle::to_point_set(tied));
        CHECK(fast.depth_of == oracle::peel_depths(tied));
        CHECK(fast.depth_of[0] == 2);
        CHECK(fast.depth_of[1] == fast.depth_of[2]);
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(nds_general(PointSet(2)), UsageError);
        CHECK_THROWS_AS(first_front(PointSet(2)), UsageError);
        CHECK_THROWS_AS(nds_fast_2d(oracle::to_point_set({{1.0, 2.0, 3.0}})), UsageError);
        const auto pts = oracle::to_point_set(kFivePoints);
        CHECK_THROWS_AS(make_front_assignment(pts, {1, 1, 1, 2}), UsageError);
        CHECK_THROWS_AS(make_front_assignment(pts, {1, 1, 1, 3, 3}), UsageError);
        CHECK_THROWS_AS(make_front_assignment(pts, {0, 1, 1, 2, 3}), UsageError);
    }

    TEST_CASE("first front examples") {
        CHECK(first_front(oracle::to_point_set({{0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}})) ==
              std::vector<std::uint32_t>{0, 1});
        CHECK(first_front(oracle::to_point_set({{4.0, 4.0}})) == std::vector<std::uint32_t>{0});
        Rng rng(1000);
        const auto pts = oracle::random_points(rng, 1000, 2);
        CHECK(first_front(oracle::to_point_set(pts)) == oracle::first_front(pts));
        const auto pts3 = oracle::random_points(rng, 500, 3, 6);
        CHECK(first_front(oracle::to_point_set(pts3)) == oracle::first_front(pts3));
    }

    TEST_CASE("every strategy matches brute-force peeling") {
        Rng rng(2024);
        for (int t = 0; t < 60; ++t) {
            const std::size_t k = 2 + t % 3;
            const std::size_t n = 1 + rng.below(300);
            const int grid = t % 4 == 0 ? 4 : (t % 4 == 1 ? 12 : 0);
            const auto pts = oracle::random_points(rng, n, k, grid);
            const auto expected = oracle::peel_depths(pts);
            const auto deb = sort_with(pts, GeneralSortStrategy::deb);
            const auto low = sort_with(pts, GeneralSortStrategy::low_memory);
            CHECK(deb.depth_of == expected);
            CHECK(low == deb);
            check_invariants(pts, deb);
            if (k == 2) {
                const auto fast = nds_fast_2d(oracle::to_point_set(pts));
                CHECK(fast == deb);
            }
        }
    }

    TEST_CASE("automatic switches to the low-memory sweep above the threshold") {
        Rng rng(3);
        const auto pts = oracle::random_points(rng, 400, 3, 8);
        const auto small = nds_general(oracle::to_point_set(pts), NdsOptions{GeneralSortStrategy::automatic, 100});
        CHECK(small.depth_of == oracle::peel_depths(pts));
    }

    TEST_CASE("peeling fixpoint") {
        Rng rng(77);
        for (int t = 0; t < 10; ++t) {
            const auto pts = oracle::random_points(rng, 200, 2 + t % 2, t % 2 ? 5 : 0);
            const auto fa = nds_general(oracle::to_point_set(pts));
            std::vector<Vec> rest;
            std::vector<std::uint32_t> original;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (fa.depth_of[i] > 1) {
                    rest.push_back(pts[i]);
                    original.push_back(fa.depth_of[i]);
                }
            }
            if (rest.empty()) continue;
            const auto again = nds_general(oracle::to_point_set(rest));
            for (std::size_t i = 0; i < rest.size(); ++i) CHECK(again.depth_of[i] + 1 == original[i]);
        }
    }

    TEST_CASE("duplicates share a depth") {
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            auto pts = oracle::random_points(rng, 150, 2 + t % 3);
            const std::size_t src = rng.below(pts.size());
            pts.push_back(pts[src]);
            const auto fa = non_dominated_sort(oracle::to_point_set(pts));
            CHECK(fa.depth_of[src] == fa.depth_of.back());
            CHECK(fa.depth_of == oracle::peel_depths(pts));
        }
    }

    TEST_CASE("front assignment round trip from depths") {
        Rng rng(8);
        const auto pts = oracle::random_points(rng, 300, 2, 10);
        const auto ps = oracle::to_point_set(pts);
        const auto fa = nds_fast_2d(ps);
        CHECK(make_front_assignment(ps, fa.depth_of) == fa);
    }
}
