#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pda {

/// One observation. Feature vectors may differ in length between samples
/// (trajectories are stored as interleaved x,y coordinates).
struct Sample {
    std::vector<double> features;

    Sample() = default;
    explicit Sample(std::vector<double> values);
};

struct Dataset {
    std::vector<Sample> samples;
    std::vector<std::string> column_names;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
    const Sample& operator[](std::size_t i) const { return samples[i]; }
};

/// Dense symmetric dissimilarity matrix for one criterion.
class DissimMatrix {
public:
    DissimMatrix() = default;

    /// Takes a full row-major n*n buffer and validates it.
    DissimMatrix(std::size_t n, std::vector<double> entries, std::string criterion_id);

    /// Builds from f(i, j) evaluated once per unordered pair i < j.
    template <typename Fn>
    static DissimMatrix from_pairs(std::size_t n, std::string criterion_id, Fn&& f) {
        std::vector<double> entries(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        return DissimMatrix(n, std::move(entries), std::move(criterion_id));
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] const std::string& criterion_id() const noexcept { return criterion_id_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * n_, n_};
    }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
    std::string criterion_id_;
};

/// Marker used in Dyad::pair for the test-sample side of a new dyad.
inline constexpr std::size_t kTestSample = std::numeric_limits<std::size_t>::max();

struct Dyad {
    std::vector<double> values;
    std::size_t i = 0;
    std::size_t j = 0;
};

/// Flat row-major n x dim array of points; the input type for sorting.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim) : dim_(dim) {}
    PointSet(std::size_t dim, std::vector<double> values);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }

    [[nodiscard]] std::span<const double> operator[](std::size_t i) const {
        return {values_.data() + i * dim_, dim_};
    }
    double at(std::size_t i, std::size_t c) const { return values_[i * dim_ + c]; }

    void push_back(std::span<const double> point);
    void reserve(std::size_t points) { values_.reserve(points * dim_); }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// All training dyads, one per unordered sample pair (i < j), in row-major
/// pair order: (0,1), (0,2), ..., (1,2), ...
class DyadSet {
public:
    DyadSet() = default;
    DyadSet(PointSet points, std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::size_t criteria() const noexcept { return points_.dim(); }
    [[nodiscard]] const PointSet& points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> values(std::size_t d) const { return points_[d]; }
    [[nodiscard]] std::pair<std::size_t, std::size_t> pair(std::size_t d) const {
        return {pairs_[d].first, pairs_[d].second};
    }
    [[nodiscard]] Dyad dyad(std::size_t d) const;

private:
    PointSet points_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

/// a strictly dominates b: a <= b everywhere and a < b somewhere.
/// Throws UsageError on length mismatch.
bool strictly_dominates(std::span<const double> a, std::span<const double> b);

/// Same relation without the length check, for inner loops.
inline bool dominates_unchecked(const double* a, const double* b, std::size_t dim) noexcept {
    bool strict = false;
    for (std::size_t c = 0; c < dim; ++c) {
        if (a[c] > b[c]) return false;
        strict |= a[c] < b[c];
    }
    return strict;
}

/// One dyad per unordered pair; dyad values[l] == matrices[l](i, j).
DyadSet build_dyads(std::span<const DissimMatrix> matrices);

/// Number of unordered pairs of n items.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

}  // namespace pda
