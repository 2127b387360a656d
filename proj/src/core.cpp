#include "pda/core.hpp"

#include <cmath>
#include <string>

#include "pda/errors.hpp"

namespace pda {

Sample::Sample(std::vector<double> values) : features(std::move(values)) {
    for (std::size_t c = 0; c < features.size(); ++c) {
        if (!std::isfinite(features[c])) {
            throw DataError("sample feature " + std::to_string(c) + " is not finite");
        }
    }
}

DissimMatrix::DissimMatrix(std::size_t n, std::vector<double> entries, std::string criterion_id)
    : n_(n), entries_(std::move(entries)), criterion_id_(std::move(criterion_id)) {
    if (entries_.size() != n_ * n_) {
        throw UsageError("dissimilarity matrix for '" + criterion_id_ + "' has " +
                         std::to_string(entries_.size()) + " entries, expected " +
                         std::to_string(n_ * n_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (entries_[i * n_ + i] != 0.0) {
            throw DataError("dissimilarity matrix for '" + criterion_id_ +
                            "' has a nonzero diagonal at " + std::to_string(i));
        }
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = entries_[i * n_ + j];
            if (!std::isfinite(v) || v < 0.0) {
                throw DataError("dissimilarity (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") for '" + criterion_id_ + "' is negative or not finite");
            }
            if (v != entries_[j * n_ + i]) {
                throw DataError("dissimilarity matrix for '" + criterion_id_ +
                                "' is not symmetric at (" + std::to_string(i) + ", " +
                                std::to_string(j) + ")");
            }
        }
    }
}

PointSet::PointSet(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
    if (dim_ == 0) throw UsageError("point dimension must be positive");
    if (values_.size() % dim_ != 0) {
        throw UsageError("point buffer length is not a multiple of the dimension");
    }
}

void PointSet::push_back(std::span<const double> point) {
    if (point.size() != dim_) throw UsageError("point has the wrong dimension");
    values_.insert(values_.end(), point.begin(), point.end());
}

DyadSet::DyadSet(PointSet points, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs)
    : points_(std::move(points)), pairs_(std::move(pairs)) {
    if (pairs_.size() != points_.size()) throw UsageError("dyad pairs and values differ in count");
}

Dyad DyadSet::dyad(std::size_t d) const {
    const auto v = points_[d];
    return Dyad{{v.begin(), v.end()}, pairs_[d].first, pairs_[d].second};
}

bool strictly_dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw UsageError("dominance test on vectors of length " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()));
    }
    return dominates_unchecked(a.data(), b.data(), a.size());
}

DyadSet build_dyads(std::span<const DissimMatrix> matrices) {
    if (matrices.empty()) throw UsageError("build_dyads needs at least one criterion");
    const std::size_t n = matrices.front().size();
    for (const auto& m : matrices) {
        if (m.size() != n) {
            throw UsageError("criterion '" + m.criterion_id() + "' has " +
                             std::to_string(m.size()) + " samples, expected " + std::to_string(n));
        }
    }
    const std::size_t k = matrices.size();
    std::vector<double> values;
    values.reserve(pair_count(n) * k);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (const auto& m : matrices) values.push_back(m(i, j));
            pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
    }
    return DyadSet(PointSet(k, std::move(values)), std::move(pairs));
}

}  // namespace pda
