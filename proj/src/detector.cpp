#include "pda/detector.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "pda/errors.hpp"
#include "pda/neighbors.hpp"

namespace pda {

PdaModel::PdaModel(Dataset training, std::vector<CriterionSpec> criteria,
                   std::vector<DissimMatrix> matrices, std::vector<std::size_t> k,
                   FrontAssignment fronts)
    : training_(std::move(training)),
      criteria_(std::move(criteria)),
      matrices_(std::move(matrices)),
      k_(std::move(k)) {
    const std::size_t n = training_.size();
    if (criteria_.empty()) throw UsageError("model needs at least one criterion");
    if (matrices_.size() != criteria_.size() || k_.size() != criteria_.size()) {
        throw UsageError("model criteria, matrices and k differ in count");
    }
    for (const auto& m : matrices_) {
        if (m.size() != n) throw UsageError("model matrix size does not match the training set");
    }
    for (auto kl : k_) {
        if (kl < 1 || kl >= n) {
            throw UsageError("neighbor count " + std::to_string(kl) + " outside [1, " +
                             std::to_string(n - 1) + "]");
        }
    }
    dyads_ = build_dyads(matrices_);
    if (fronts.depth_of.size() != dyads_.size()) {
        throw UsageError("front assignment covers " + std::to_string(fronts.depth_of.size()) +
                         " dyads, model has " + std::to_string(dyads_.size()));
    }
    fronts_ = make_front_assignment(dyads_.points(), std::move(fronts.depth_of));
    index_fronts();
}

void PdaModel::index_fronts() {
    const std::size_t dim = dyads_.criteria();
    front_offset_.assign(1, 0);
    front_values_.clear();
    front_values_.reserve(dyads_.size() * dim);
    front_max_.assign(fronts_.front_count() * dim, -std::numeric_limits<double>::infinity());
    front_min_.assign(fronts_.front_count() * dim, std::numeric_limits<double>::infinity());
    for (std::size_t f = 0; f < fronts_.front_count(); ++f) {
        for (auto member : fronts_.fronts[f]) {
            const auto v = dyads_.values(member);
            for (std::size_t c = 0; c < dim; ++c) {
                front_values_.push_back(v[c]);
                front_max_[f * dim + c] = std::max(front_max_[f * dim + c], v[c]);
                front_min_[f * dim + c] = std::min(front_min_[f * dim + c], v[c]);
            }
        }
        front_offset_.push_back(front_offset_.back() + fronts_.fronts[f].size());
    }
}

bool PdaModel::is_below(std::size_t f, std::span<const double> d) const {
    const std::size_t dim = dyads_.criteria();
    const double* base = front_values_.data() + front_offset_[f] * dim;
    const std::size_t count = front_offset_[f + 1] - front_offset_[f];

    if (dim == 2) {
        // Staircase: x ascending, y non-increasing. The first member with
        // x >= d.x carries the largest y among all candidates.
        std::size_t lo = 0, hi = count;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (base[2 * mid] < d[0]) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == count) return false;
        const double qx = base[2 * lo];
        const double qy = base[2 * lo + 1];
        return qy > d[1] || (qy == d[1] && qx > d[0]);
    }

    for (std::size_t c = 0; c < dim; ++c) {
        if (d[c] > front_max_[f * dim + c]) return false;
    }
    for (std::size_t m = 0; m < count; ++m) {
        if (dominates_unchecked(d.data(), base + m * dim, dim)) return true;
    }
    return false;
}

bool PdaModel::is_dominated_by(std::size_t f, std::span<const double> d) const {
    const std::size_t dim = dyads_.criteria();
    const double* base = front_values_.data() + front_offset_[f] * dim;
    const std::size_t count = front_offset_[f + 1] - front_offset_[f];

    if (dim == 2) {
        // Last member with x <= d.x carries the smallest y among candidates.
        std::size_t lo = 0, hi = count;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (base[2 * mid] <= d[0]) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == 0) return false;
        const double qx = base[2 * (lo - 1)];
        const double qy = base[2 * (lo - 1) + 1];
        return qy < d[1] || (qy == d[1] && qx < d[0]);
    }

    for (std::size_t c = 0; c < dim; ++c) {
        if (d[c] < front_min_[f * dim + c]) return false;
    }
    for (std::size_t m = 0; m < count; ++m) {
        if (dominates_unchecked(base + m * dim, d.data(), dim)) return true;
    }
    return false;
}

std::uint32_t PdaModel::depth(std::span<const double> values, DepthRule rule) const {
    if (values.size() != dyads_.criteria()) {
        throw UsageError("dyad has " + std::to_string(values.size()) + " values, model has " +
                         std::to_string(dyads_.criteria()) + " criteria");
    }
    const std::size_t m = front_count();
    switch (rule) {
        case DepthRule::below_scan:
            for (std::size_t f = 0; f < m; ++f) {
                if (is_below(f, values)) return static_cast<std::uint32_t>(f + 1);
            }
            return static_cast<std::uint32_t>(m + 1);
        case DepthRule::below_bisect: {
            std::size_t lo = 0, hi = m;
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (is_below(mid, values)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return static_cast<std::uint32_t>(lo + 1);
        }
        case DepthRule::insertion: {
            std::size_t lo = 0, hi = m;
            while (lo < hi) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (is_dominated_by(mid, values)) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            return static_cast<std::uint32_t>(lo + 1);
        }
    }
    throw UsageError("unknown depth rule");
}

PdaModel train(const Dataset& training, const std::vector<CriterionSpec>& criteria,
               const TrainOptions& options) {
    if (training.size() < 3) {
        throw UsageError("training needs at least 3 samples, got " + std::to_string(training.size()));
    }
    if (criteria.empty()) throw UsageError("training needs at least one criterion");

    std::vector<CriterionSpec> resolved;
    std::vector<DissimMatrix> matrices;
    for (const auto& c : criteria) {
        validate_criterion(c, training);
        resolved.push_back(resolve_criterion(c, training));
        matrices.push_back(pairwise_dissimilarities(training, resolved.back()));
    }

    std::vector<std::size_t> k;
    if (options.k_override) {
        if (options.k_override->size() != criteria.size()) {
            throw UsageError("k override has " + std::to_string(options.k_override->size()) +
                             " entries for " + std::to_string(criteria.size()) + " criteria");
        }
        k = *options.k_override;
    } else {
        for (const auto& m : matrices) k.push_back(select_k(m));
    }

    const auto dyads = build_dyads(matrices);
    auto fronts = non_dominated_sort(dyads.points(), options.sort);
    return PdaModel(training, std::move(resolved), std::move(matrices), std::move(k),
                    std::move(fronts));
}

TestDyads make_test_dyads(const PdaModel& model, const Sample& x) {
    const std::size_t kc = model.criteria_count();
    Dataset single;
    single.samples.push_back(x);

    std::vector<std::vector<double>> dists;
    dists.reserve(kc);
    for (const auto& c : model.criteria()) {
        validate_criterion(c, single);
        dists.push_back(dissimilarities_to(model.training(), c, x));
    }

    TestDyads out;
    for (std::size_t l = 0; l < kc; ++l) {
        for (auto j : nearest_indices(dists[l], model.k()[l])) {
            Dyad d;
            d.values.reserve(kc);
            for (std::size_t c = 0; c < kc; ++c) d.values.push_back(dists[c][j]);
            d.i = kTestSample;
            d.j = j;
            out.dyads.push_back(std::move(d));
            out.links.push_back({l, j});
        }
    }
    return out;
}

std::uint32_t dyad_depth(const PdaModel& model, const Dyad& dyad, DepthRule rule) {
    return model.depth(dyad.values, rule);
}

double mean_depth(std::span<const std::uint32_t> depths) {
    if (depths.empty()) throw UsageError("mean of an empty depth list");
    double sum = 0.0;
    for (auto d : depths) sum += d;
    return sum / static_cast<double>(depths.size());
}

ScoreReport score(const PdaModel& model, const Sample& x, std::optional<double> threshold,
                  DepthRule rule) {
    auto test = make_test_dyads(model, x);
    ScoreReport report;
    report.depths.reserve(test.dyads.size());
    for (const auto& d : test.dyads) report.depths.push_back(model.depth(d.values, rule));
    report.score = mean_depth(report.depths);
    report.neighbors = std::move(test.links);
    if (threshold) report.is_anomaly = report.score > *threshold;
    return report;
}

}  // namespace pda
