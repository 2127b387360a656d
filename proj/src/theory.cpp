#include "pda/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pda/errors.hpp"
#include "pda/nds.hpp"
#include "pda/parallel.hpp"
#include "pda/rng.hpp"

namespace pda {

namespace {

/// Twice the signed area of (o, a, b); positive for a counter-clockwise turn.
double cross(std::span<const double> o, std::span<const double> a, std::span<const double> b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

struct StepStats {
    std::size_t front = 0;
    std::size_t scalarizable = 0;
};

/// 2-D first front kept as a staircase sorted by (x, y).
class Staircase {
public:
    /// True if some member strictly dominates p.
    [[nodiscard]] bool dominates(double px, double py) const {
        auto it = std::upper_bound(xs_.begin(), xs_.end(), px);
        if (it == xs_.begin()) return false;
        const auto i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        return ys_[i] < py || (ys_[i] == py && xs_[i] < px);
    }

    /// Replaces the staircase by the first front of itself plus `batch`.
    void merge(const PointSet& batch) {
        if (batch.empty()) return;
        PointSet all(2);
        all.reserve(xs_.size() + batch.size());
        for (std::size_t i = 0; i < xs_.size(); ++i) all.push_back(std::array{xs_[i], ys_[i]});
        for (std::size_t i = 0; i < batch.size(); ++i) all.push_back(batch[i]);
        std::vector<std::pair<double, double>> kept;
        for (auto idx : first_front(all)) kept.emplace_back(all.at(idx, 0), all.at(idx, 1));
        std::sort(kept.begin(), kept.end());
        xs_.clear();
        ys_.clear();
        for (const auto& [x, y] : kept) {
            xs_.push_back(x);
            ys_.push_back(y);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return xs_.size(); }

    [[nodiscard]] PointSet points() const {
        PointSet out(2);
        for (std::size_t i = 0; i < xs_.size(); ++i) out.push_back(std::array{xs_[i], ys_[i]});
        return out;
    }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

std::vector<StepStats> run_trial(const TheoryConfig& config, std::size_t trial) {
    const std::size_t n_max = config.sample_counts.back();
    Rng rng(derive_seed(config.seed, trial));
    std::vector<double> xs(n_max), ys(n_max);
    for (std::size_t i = 0; i < n_max; ++i) {
        xs[i] = rng.uniform();
        ys[i] = rng.uniform();
    }

    std::vector<StepStats> out;
    out.reserve(config.sample_counts.size());
    Staircase front;
    std::size_t done = 0;
    for (const std::size_t count : config.sample_counts) {
        // Items already dominated by the running front cannot reach it.
        PointSet batch(2);
        auto offer = [&](double a, double b) {
            if (!front.dominates(a, b)) batch.push_back(std::array{a, b});
        };
        for (std::size_t j = done; j < count; ++j) {
            if (config.domain == TheoryDomain::iid_box) {
                offer(xs[j], ys[j]);
                continue;
            }
            for (std::size_t i = 0; i < j; ++i) {
                const double dx = std::abs(xs[i] - xs[j]);
                const double dy = std::abs(ys[i] - ys[j]);
                if (config.domain == TheoryDomain::box) {
                    offer(dx, dy);
                } else {
                    offer(dx + dy, dx - dy);
                }
            }
        }
        front.merge(batch);
        done = count;
        StepStats s;
        s.front = front.size();
        s.scalarizable = front.size() == 0 ? 0 : scalarization_set(front.points()).size();
        out.push_back(s);
    }
    return out;
}

double stderr_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

std::vector<std::uint32_t> scalarization_set(const PointSet& front) {
    if (front.empty()) throw UsageError("scalarization_set: empty front");
    if (front.dim() != 2) throw UsageError("scalarization_set supports 2 criteria only");

    std::vector<std::uint32_t> order(front.size());
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (front.at(a, 0) != front.at(b, 0)) return front.at(a, 0) < front.at(b, 0);
        if (front.at(a, 1) != front.at(b, 1)) return front.at(a, 1) < front.at(b, 1);
        return a < b;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto p = front[order[i - 1]];
        const auto q = front[order[i]];
        if (q[1] > p[1] || (q[1] == p[1] && q[0] != p[0])) {
            throw UsageError("scalarization_set: input is not a Pareto front");
        }
    }

    // Lower hull from the leftmost (highest) to the rightmost (lowest) point;
    // every edge has negative slope, so each edge normal is a strictly
    // positive weight. Collinear points are kept as tied minimizers.
    std::vector<std::uint32_t> hull;
    for (auto idx : order) {
        while (hull.size() >= 2 &&
               cross(front[hull[hull.size() - 2]], front[hull.back()], front[idx]) < 0.0) {
            hull.pop_back();
        }
        hull.push_back(idx);
    }
    std::sort(hull.begin(), hull.end());
    return hull;
}

std::string_view to_string(TheoryDomain domain) {
    switch (domain) {
        case TheoryDomain::box: return "box";
        case TheoryDomain::diamond: return "diamond";
        case TheoryDomain::iid_box: return "iid";
    }
    return "unknown";
}

TheoryDomain parse_theory_domain(std::string_view name) {
    for (auto d : {TheoryDomain::box, TheoryDomain::diamond, TheoryDomain::iid_box}) {
        if (to_string(d) == name) return d;
    }
    throw UsageError("unknown theory domain '" + std::string(name) + "' (expected box, diamond or iid)");
}

OlsLine ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw UsageError("regression needs 2+ paired values");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw UsageError("regression needs distinct x values");
    OlsLine line;
    line.slope = sxy / sxx;
    line.intercept = my - line.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (line.intercept + line.slope * x[i]);
        ss += r * r;
    }
    line.rms_residual = std::sqrt(ss / n);
    return line;
}

GrowthFit fit_log_growth(std::span<const double> n, std::span<const double> y) {
    std::vector<double> ln_n, ratio;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(n[i] > 1.0)) throw UsageError("log growth fit needs n > 1");
        ln_n.push_back(std::log(n[i]));
        ratio.push_back(y[i] / ln_n.back());
    }
    const auto line = ordinary_least_squares(ln_n, ratio);
    const double mean_ln = std::accumulate(ln_n.begin(), ln_n.end(), 0.0) / static_cast<double>(ln_n.size());
    GrowthFit fit;
    fit.model = "alpha*ln(n)";
    fit.alpha = line.intercept + line.slope * mean_ln;
    fit.intercept = line.intercept;
    fit.slope = line.slope;
    fit.rms_residual = line.rms_residual;
    return fit;
}

GrowthFit fit_power_growth(std::span<const double> n, std::span<const double> y) {
    std::vector<double> ln_n, ln_y;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(n[i] > 0.0) || !(y[i] > 0.0)) throw UsageError("power growth fit needs positive n and y");
        ln_n.push_back(std::log(n[i]));
        ln_y.push_back(std::log(y[i]));
    }
    const auto line = ordinary_least_squares(ln_n, ln_y);
    GrowthFit fit;
    fit.model = "alpha*n^beta";
    fit.alpha = std::exp(line.intercept);
    fit.beta = line.slope;
    fit.intercept = line.intercept;
    fit.slope = line.slope;
    fit.rms_residual = line.rms_residual;
    return fit;
}

std::vector<std::size_t> sample_counts_for(TheoryDomain domain, double n_min, double n_max,
                                           std::size_t points) {
    if (!(n_min >= 1.0) || !(n_max >= n_min) || points < 1) {
        throw UsageError("sample grid needs 1 <= n_min <= n_max and at least one point");
    }
    auto count_for = [&](double n) -> std::size_t {
        if (domain == TheoryDomain::iid_box) return static_cast<std::size_t>(std::llround(n));
        // Largest N with C(N, 2) <= n, at least 2.
        auto big_n = static_cast<std::size_t>(std::floor(0.5 + std::sqrt(0.25 + 2.0 * n)));
        while (pair_count(big_n) > n && big_n > 2) --big_n;
        while (static_cast<double>(pair_count(big_n + 1)) <= n) ++big_n;
        return std::max<std::size_t>(2, big_n);
    };
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        const double n = std::exp(std::log(n_min) + t * (std::log(n_max) - std::log(n_min)));
        const auto c = std::max<std::size_t>(1, count_for(n));
        if (out.empty() || c > out.back()) out.push_back(c);
    }
    return out;
}

TheoryRun run_theory_experiment(const TheoryConfig& config) {
    if (config.sample_counts.empty()) throw UsageError("theory experiment needs a sample grid");
    if (config.trials < 1) throw UsageError("theory experiment needs at least one trial");
    const std::size_t min_count = config.domain == TheoryDomain::iid_box ? 1 : 2;
    for (std::size_t i = 0; i < config.sample_counts.size(); ++i) {
        if (config.sample_counts[i] < min_count ||
            (i > 0 && config.sample_counts[i] <= config.sample_counts[i - 1])) {
            throw UsageError("sample counts must be strictly increasing and large enough to form items");
        }
    }

    std::vector<std::vector<StepStats>> trials(config.trials);
    parallel_for(config.trials, config.threads,
                 [&](std::size_t t) { trials[t] = run_trial(config, t); });

    TheoryRun run;
    run.domain = config.domain;
    run.sample_counts = config.sample_counts;
    run.trials = config.trials;
    run.seed = config.seed;
    const std::size_t steps = config.sample_counts.size();
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t c = config.sample_counts[s];
        run.n_grid.push_back(config.domain == TheoryDomain::iid_box ? c : pair_count(c));
        std::vector<double> f, l, u;
        for (const auto& trial : trials) {
            f.push_back(static_cast<double>(trial[s].front));
            l.push_back(static_cast<double>(trial[s].scalarizable));
            u.push_back(static_cast<double>(trial[s].front - trial[s].scalarizable));
        }
        const double nt = static_cast<double>(config.trials);
        run.mean_front.push_back(std::accumulate(f.begin(), f.end(), 0.0) / nt);
        run.mean_scalarizable.push_back(std::accumulate(l.begin(), l.end(), 0.0) / nt);
        run.mean_unattainable.push_back(std::accumulate(u.begin(), u.end(), 0.0) / nt);
        run.stderr_front.push_back(stderr_of(f, run.mean_front.back()));
        run.stderr_unattainable.push_back(stderr_of(u, run.mean_unattainable.back()));
    }

    // Fit over steps where the regression is defined.
    std::vector<double> n, y;
    for (std::size_t s = 0; s < steps; ++s) {
        if (run.n_grid[s] > 1 && run.mean_unattainable[s] > 0.0) {
            n.push_back(static_cast<double>(run.n_grid[s]));
            y.push_back(run.mean_unattainable[s]);
        }
    }
    if (n.size() >= 2) {
        run.fit = config.domain == TheoryDomain::diamond ? fit_power_growth(n, y) : fit_log_growth(n, y);
    }
    return run;
}

TheoryRun box_dyad_experiment(std::vector<std::size_t> sample_counts, std::size_t trials,
                              std::uint64_t seed, std::size_t threads) {
    return run_theory_experiment({TheoryDomain::box, std::move(sample_counts), trials, seed, threads});
}

TheoryRun diamond_dyad_experiment(std::vector<std::size_t> sample_counts, std::size_t trials,
                                  std::uint64_t seed, std::size_t threads) {
    return run_theory_experiment(
        {TheoryDomain::diamond, std::move(sample_counts), trials, seed, threads});
}

double uniform_front_size_quadrature(std::size_t n) {
    if (n < 1) throw UsageError("uniform_front_size_quadrature needs n >= 1");
    using boost::math::quadrature::gauss_kronrod;
    const double count = static_cast<double>(n);

    // The inner integral over y is elementary:
    //   int_0^1 (1 - x y)^(n-1) dy = (1 - (1 - x)^n) / (n x),
    // so n times the double integral is int_0^1 (1 - (1 - x)^n) / x dx.
    auto f = [&](double x) {
        if (x == 0.0) return count;
        return -std::expm1(count * std::log1p(-x)) / x;
    };

    // The integrand is ~n below x ~ 1/n and ~1/x above; breakpoints at
    // 10^j / n keep each panel smooth on its own scale.
    std::vector<double> cuts{0.0};
    for (double c = 1.0 / count; c < 1.0; c *= 10.0) cuts.push_back(c);
    cuts.push_back(1.0);
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        total += gauss_kronrod<double, 61>::integrate(f, cuts[i - 1], cuts[i], 15, 1e-13);
    }
    return total;
}

}  // namespace pda
