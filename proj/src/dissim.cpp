#include "pda/dissim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pda/errors.hpp"

namespace pda {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::vector<double> flatten(const std::vector<Point2>& pts) {
    std::vector<double> out;
    out.reserve(2 * pts.size());
    for (const auto& p : pts) {
        out.push_back(p.x);
        out.push_back(p.y);
    }
    return out;
}

/// Criteria whose dissimilarity is a squared distance between per-sample
/// embeddings. pairwise_dissimilarities embeds each sample once.
std::optional<std::vector<double>> embedding(const CriterionSpec& spec, const Sample& s) {
    return std::visit(
        overloaded{
            [&](const SquaredDiffDim& c) -> std::optional<std::vector<double>> {
                return std::vector<double>{s.features[c.dim]};
            },
            [&](const SquaredEuclidean& c) -> std::optional<std::vector<double>> {
                if (c.dims.empty()) return s.features;
                std::vector<double> out;
                out.reserve(c.dims.size());
                for (auto d : c.dims) out.push_back(s.features[d]);
                return out;
            },
            [&](const SpeedHistogram& c) -> std::optional<std::vector<double>> {
                if (!c.range) throw UsageError("speed_histogram criterion has no resolved range");
                return speed_histogram(trajectory_from_features(s.features), c.bins,
                                       c.range->first, c.range->second);
            },
            [&](const ShapeResample& c) -> std::optional<std::vector<double>> {
                return flatten(resample_by_arclength(trajectory_from_features(s.features), c.points));
            },
            [](const auto&) -> std::optional<std::vector<double>> { return std::nullopt; },
        },
        spec.kind);
}

void require_dim(std::size_t dim, const Dataset& data, const std::string& id) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (dim >= data[i].features.size()) {
            throw ConfigError("criterion " + id + " references feature " + std::to_string(dim) +
                              " but sample " + std::to_string(i) + " has " +
                              std::to_string(data[i].features.size()) + " features");
        }
    }
}

void require_trajectories(const Dataset& data, const std::string& id) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& f = data[i].features;
        if (f.size() % 2 != 0 || f.size() < 4) {
            throw ConfigError("criterion " + id + " needs trajectory samples (x,y pairs, at least 2 "
                              "positions); sample " + std::to_string(i) + " has " +
                              std::to_string(f.size()) + " features");
        }
    }
}

}  // namespace

std::string criterion_id(const CriterionSpec& spec) {
    return std::visit(
        overloaded{
            [](const SquaredDiffDim& c) { return "squared_diff_dim(" + std::to_string(c.dim) + ")"; },
            [](const AbsDiffDim& c) { return "abs_diff_dim(" + std::to_string(c.dim) + ")"; },
            [](const SquaredEuclidean& c) {
                std::string s = "squared_euclidean(";
                for (std::size_t i = 0; i < c.dims.size(); ++i) {
                    s += (i ? "," : "") + std::to_string(c.dims[i]);
                }
                return s + ")";
            },
            [](const SpeedHistogram& c) { return "speed_histogram(" + std::to_string(c.bins) + ")"; },
            [](const ShapeResample& c) { return "shape_resample(" + std::to_string(c.points) + ")"; },
            [](const WeightedCombo& c) {
                std::ostringstream os;
                os << "weighted_combo(";
                for (std::size_t i = 0; i < c.children.size(); ++i) {
                    os << (i ? "," : "") << c.weights[i] << "*" << criterion_id(c.children[i]);
                }
                os << ")";
                return os.str();
            },
        },
        spec.kind);
}

void validate_criterion(const CriterionSpec& spec, const Dataset& data) {
    const auto id = criterion_id(spec);
    std::visit(overloaded{
                   [&](const SquaredDiffDim& c) { require_dim(c.dim, data, id); },
                   [&](const AbsDiffDim& c) { require_dim(c.dim, data, id); },
                   [&](const SquaredEuclidean& c) {
                       for (auto d : c.dims) require_dim(d, data, id);
                       if (c.dims.empty()) {
                           for (std::size_t i = 1; i < data.size(); ++i) {
                               if (data[i].features.size() != data[0].features.size()) {
                                   throw ConfigError(id + " over all features needs equal-length samples");
                               }
                           }
                       }
                   },
                   [&](const SpeedHistogram& c) {
                       if (c.bins < 1) throw ConfigError(id + ": bins must be >= 1");
                       if (c.range && !(std::isfinite(c.range->first) && std::isfinite(c.range->second) &&
                                        c.range->first < c.range->second)) {
                           throw ConfigError(id + ": degenerate histogram range");
                       }
                       require_trajectories(data, id);
                   },
                   [&](const ShapeResample& c) {
                       if (c.points < 2) throw ConfigError(id + ": resample count must be >= 2");
                       require_trajectories(data, id);
                   },
                   [&](const WeightedCombo& c) {
                       if (c.children.empty() || c.weights.size() != c.children.size()) {
                           throw ConfigError(id + ": weights and children differ in count");
                       }
                       bool any_positive = false;
                       for (double w : c.weights) {
                           if (!std::isfinite(w) || w < 0.0) throw ConfigError(id + ": negative weight");
                           any_positive |= w > 0.0;
                       }
                       if (!any_positive) throw ConfigError(id + ": all weights are zero");
                       for (const auto& child : c.children) validate_criterion(child, data);
                   },
               },
               spec.kind);
}

CriterionSpec resolve_criterion(const CriterionSpec& spec, const Dataset& training) {
    return std::visit(
        overloaded{
            [&](const SpeedHistogram& c) -> CriterionSpec {
                if (c.range) return spec;
                require_trajectories(training, criterion_id(spec));
                double max_speed = 0.0;
                for (const auto& s : training.samples) {
                    for (double v : trajectory_speeds(trajectory_from_features(s.features))) {
                        max_speed = std::max(max_speed, v);
                    }
                }
                if (!(max_speed > 0.0)) {
                    throw ConfigError(criterion_id(spec) +
                                      ": training trajectories are stationary, histogram range is degenerate");
                }
                SpeedHistogram resolved = c;
                resolved.range = std::pair{0.0, max_speed};
                return CriterionSpec{resolved};
            },
            [&](const WeightedCombo& c) -> CriterionSpec {
                WeightedCombo resolved{c.weights, {}};
                for (const auto& child : c.children) {
                    resolved.children.push_back(resolve_criterion(child, training));
                }
                return CriterionSpec{resolved};
            },
            [&](const auto&) -> CriterionSpec { return spec; },
        },
        spec.kind);
}

double dissimilarity(const CriterionSpec& spec, const Sample& a, const Sample& b) {
    if (const auto* c = std::get_if<AbsDiffDim>(&spec.kind)) {
        return std::abs(a.features[c->dim] - b.features[c->dim]);
    }
    if (const auto* c = std::get_if<WeightedCombo>(&spec.kind)) {
        std::vector<double> values;
        values.reserve(c->children.size());
        for (const auto& child : c->children) values.push_back(dissimilarity(child, a, b));
        return weighted_combo(values, c->weights);
    }
    const auto ea = embedding(spec, a);
    const auto eb = embedding(spec, b);
    return squared_distance(*ea, *eb);
}

DissimMatrix pairwise_dissimilarities(const Dataset& data, const CriterionSpec& spec) {
    if (data.empty()) throw UsageError("pairwise_dissimilarities: empty dataset");
    validate_criterion(spec, data);
    const auto resolved = resolve_criterion(spec, data);
    const std::size_t n = data.size();

    std::vector<std::vector<double>> embedded;
    if (embedding(resolved, data[0])) {
        embedded.reserve(n);
        for (const auto& s : data.samples) embedded.push_back(*embedding(resolved, s));
        return DissimMatrix::from_pairs(n, criterion_id(resolved), [&](std::size_t i, std::size_t j) {
            return squared_distance(embedded[i], embedded[j]);
        });
    }
    return DissimMatrix::from_pairs(n, criterion_id(resolved), [&](std::size_t i, std::size_t j) {
        return dissimilarity(resolved, data[i], data[j]);
    });
}

std::vector<double> dissimilarities_to(const Dataset& data, const CriterionSpec& spec,
                                       const Sample& x) {
    std::vector<double> out;
    out.reserve(data.size());
    if (const auto ex = embedding(spec, x)) {
        for (const auto& s : data.samples) out.push_back(squared_distance(*embedding(spec, s), *ex));
        return out;
    }
    for (const auto& s : data.samples) out.push_back(dissimilarity(spec, s, x));
    return out;
}

std::vector<CriterionSpec> per_dimension_squared_diffs(std::size_t m) {
    std::vector<CriterionSpec> out;
    for (std::size_t d = 0; d < m; ++d) out.push_back(CriterionSpec{SquaredDiffDim{d}});
    return out;
}

Trajectory trajectory_from_features(std::span<const double> features) {
    if (features.size() % 2 != 0 || features.size() < 4) {
        throw ConfigError("trajectory needs an even number of coordinates and at least 2 positions");
    }
    Trajectory t;
    t.positions.reserve(features.size() / 2);
    for (std::size_t i = 0; i < features.size(); i += 2) {
        t.positions.push_back({features[i], features[i + 1]});
    }
    return t;
}

std::vector<double> trajectory_to_features(const Trajectory& t) { return flatten(t.positions); }

double squared_diff_dim(const Sample& a, const Sample& b, std::size_t dim) {
    if (dim >= a.features.size() || dim >= b.features.size()) {
        throw ConfigError("squared_diff_dim: feature " + std::to_string(dim) + " out of range");
    }
    const double d = a.features[dim] - b.features[dim];
    return d * d;
}

std::vector<double> trajectory_speeds(const Trajectory& t) {
    std::vector<double> speeds;
    for (std::size_t i = 1; i < t.positions.size(); ++i) {
        speeds.push_back(std::hypot(t.positions[i].x - t.positions[i - 1].x,
                                    t.positions[i].y - t.positions[i - 1].y));
    }
    return speeds;
}

std::vector<double> speed_histogram(const Trajectory& t, std::size_t bins, double lo, double hi) {
    if (bins < 1) throw ConfigError("speed histogram needs at least one bin");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw ConfigError("speed histogram range is degenerate");
    }
    if (t.positions.size() < 2) throw ConfigError("trajectory needs at least 2 positions");
    std::vector<double> hist(bins, 0.0);
    const auto speeds = trajectory_speeds(t);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : speeds) {
        const double pos = std::floor((v - lo) / width);
        const auto bin = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
        hist[bin] += 1.0;
    }
    const double mass = static_cast<double>(speeds.size());
    for (auto& h : hist) h /= mass;
    return hist;
}

double speed_histogram_dissim(const Trajectory& a, const Trajectory& b, std::size_t bins,
                              double lo, double hi) {
    return squared_distance(speed_histogram(a, bins, lo, hi), speed_histogram(b, bins, lo, hi));
}

std::vector<Point2> resample_by_arclength(const Trajectory& t, std::size_t count) {
    if (count < 2) throw ConfigError("resample count must be >= 2");
    const auto& p = t.positions;
    if (p.size() < 2) throw ConfigError("trajectory needs at least 2 positions");

    std::vector<double> cumulative(p.size(), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + std::hypot(p[i].x - p[i - 1].x, p[i].y - p[i - 1].y);
    }
    const double total = cumulative.back();

    std::vector<Point2> out;
    out.reserve(count);
    std::size_t seg = 1;
    for (std::size_t k = 0; k < count; ++k) {
        if (k + 1 == count) {
            out.push_back(p.back());
            break;
        }
        const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
        while (seg + 1 < p.size() && cumulative[seg] < target) ++seg;
        const double len = cumulative[seg] - cumulative[seg - 1];
        if (len <= 0.0) {
            out.push_back(p[seg - 1]);
            continue;
        }
        const double u = std::clamp((target - cumulative[seg - 1]) / len, 0.0, 1.0);
        out.push_back({p[seg - 1].x + u * (p[seg].x - p[seg - 1].x),
                       p[seg - 1].y + u * (p[seg].y - p[seg - 1].y)});
    }
    return out;
}

double shape_dissim(const Trajectory& a, const Trajectory& b, std::size_t count) {
    return squared_distance(flatten(resample_by_arclength(a, count)),
                            flatten(resample_by_arclength(b, count)));
}

double weighted_combo(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size()) throw UsageError("weighted_combo: length mismatch");
    bool any_positive = false;
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw UsageError("weighted_combo: negative weight");
        any_positive |= weights[i] > 0.0;
        sum += weights[i] * values[i];
    }
    if (!any_positive) throw UsageError("weighted_combo: all weights are zero");
    return sum;
}

}  // namespace pda
