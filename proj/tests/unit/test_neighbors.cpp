#include <doctest.h>

#include "oracles.hpp"
#include "pda/dissim.hpp"
#include "pda/errors.hpp"
#include "pda/neighbors.hpp"

using namespace pda;

namespace {

DissimMatrix line(std::initializer_list<double> xs) {
    Dataset d;
    for (double x : xs) d.samples.emplace_back(std::vector<double>{x});
    return pairwise_dissimilarities(d, CriterionSpec{AbsDiffDim{0}});
}

DissimMatrix random_matrix(Rng& rng, std::size_t n, int grid) {
    Dataset d;
    for (const auto& p : oracle::random_points(rng, n, 2, grid)) d.samples.emplace_back(p);
    return pairwise_dissimilarities(d, CriterionSpec{SquaredEuclidean{}});
}

}  // namespace

TEST_SUITE("neighbors") {
    TEST_CASE("select_k hand traces") {
        CHECK(select_k(line({0, 1, 10})) == 1);
        CHECK(select_k(line({0, 1, 100, 101})) == 2);
        CHECK(select_k(line({0, 5})) == 1);
        CHECK_THROWS_AS(select_k(line({3})), UsageError);
    }

    TEST_CASE("select_k is the smallest connecting k") {
        Rng rng(99);
        for (int t = 0; t < 100; ++t) {
            const std::size_t n = 2 + rng.below(60);
            const auto m = random_matrix(rng, n, t % 3 == 0 ? 5 : 0);
            const auto rows = oracle::matrix_rows(m);
            const auto k = select_k(m);
            CHECK(k == oracle::smallest_connected_k(rows));
            CHECK(oracle::knn_graph_connected(rows, k));
            if (k > 1) CHECK_FALSE(oracle::knn_graph_connected(rows, k - 1));
        }
    }

    TEST_CASE("well separated clusters still terminate") {
        // Two tight groups far apart: connecting them needs k beyond the group size.
        const auto m = line({0, 0.1, 0.2, 50, 50.1, 50.2});
        const auto k = select_k(m);
        CHECK(k == oracle::smallest_connected_k(oracle::matrix_rows(m)));
        CHECK(k == 3);
    }

    TEST_CASE("nearest indices order by distance then index") {
        const std::vector<double> d{3, 1, 2, 1, 0, 2};
        CHECK(nearest_indices(d, 3) == std::vector<std::uint32_t>{4, 1, 3});
        CHECK(nearest_indices(d, 3, 4) == std::vector<std::uint32_t>{1, 3, 2});
        CHECK_THROWS_AS(nearest_indices(d, 7), UsageError);
        CHECK_THROWS_AS(nearest_indices(d, 6, 0), UsageError);

        Rng rng(1);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> row;
            const std::size_t n = 1 + rng.below(200);
            for (std::size_t j = 0; j < n; ++j) row.push_back(double(rng.below(t % 2 ? 5 : 1000)));
            const std::size_t k = 1 + rng.below(n);
            CHECK(nearest_indices(row, k) == oracle::nearest(row, k, kTestSample));
        }
    }

    TEST_CASE("neighbor table grows on demand") {
        Rng rng(4);
        const auto m = random_matrix(rng, 80, 6);
        NeighborTable table(m, 2);
        const auto rows = oracle::matrix_rows(m);
        for (std::size_t i = 0; i < m.size(); i += 7) {
            for (std::size_t k : {1u, 2u, 30u, 79u}) {
                const auto got = table.neighbors(i, k);
                CHECK(std::vector<std::uint32_t>(got.begin(), got.end()) == oracle::nearest(rows[i], k, i));
                CHECK(table.kth_distance(i, k) == rows[i][oracle::nearest(rows[i], k, i).back()]);
            }
        }
        CHECK_THROWS_AS(table.neighbors(0, 80), UsageError);
        CHECK_THROWS_AS(table.neighbors(0, 0), UsageError);
    }

    TEST_CASE("union find") {
        UnionFind uf(5);
        CHECK(uf.unite(0, 1));
        CHECK_FALSE(uf.unite(1, 0));
        CHECK(uf.unite(3, 4));
        CHECK(uf.components() == 3);
        CHECK(uf.find(4) == uf.find(3));
    }
}
