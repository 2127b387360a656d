#include "pda/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pda/errors.hpp"
#include "pda/neighbors.hpp"
#include "pda/parallel.hpp"
#include "pda/rng.hpp"
#include "pda/roc.hpp"

namespace pda {

namespace {

Sample nominal_sample(Rng& rng, std::size_t dims) {
    std::vector<double> f(dims);
    for (auto& v : f) v = rng.uniform();
    return Sample(std::move(f));
}

double class_auc(const std::vector<double>& scores, const std::vector<int>& test_class) {
    std::vector<double> nominal, anomalous;
    for (std::size_t t = 0; t < scores.size(); ++t) {
        (test_class[t] == 0 ? nominal : anomalous).push_back(scores[t]);
    }
    return auc(nominal, anomalous).auc;
}

}  // namespace

const BaselineSummary& ExperimentReport::baseline(BaselineMethod method) const {
    for (const auto& b : baselines) {
        if (b.method == method) return b;
    }
    throw UsageError("report has no results for baseline " + std::string(to_string(method)));
}

MeanStderr mean_and_stderr(const std::vector<double>& values) {
    MeanStderr out;
    if (values.empty()) return out;
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return out;
}

SimulationData draw_simulation_data(const SimulationConfig& config, std::size_t run) {
    if (config.dims < 1) throw UsageError("simulation needs at least one dimension");
    if (config.anomaly_probability < 0.0 ||
        config.anomaly_probability * static_cast<double>(config.dims) > 1.0) {
        throw UsageError("anomaly class probabilities must lie in [0, 1/dims]");
    }
    SimulationData data;
    Rng train_rng(derive_seed(config.seed, run, 0));
    for (std::size_t i = 0; i < config.n_train; ++i) {
        data.training.samples.push_back(nominal_sample(train_rng, config.dims));
    }

    Rng test_rng(derive_seed(config.seed, run, 1));
    for (std::size_t i = 0; i < config.n_test; ++i) {
        const double u = test_rng.uniform();
        const auto cls = static_cast<std::size_t>(u / config.anomaly_probability);
        Sample s = nominal_sample(test_rng, config.dims);
        if (config.anomaly_probability > 0.0 && cls < config.dims) {
            s.features[cls] = test_rng.uniform(config.anomaly_low, config.anomaly_high);
            data.test_class.push_back(static_cast<int>(cls) + 1);
        } else {
            data.test_class.push_back(0);
        }
        data.test.samples.push_back(std::move(s));
    }
    return data;
}

RunResult run_simulation_once(const SimulationConfig& config, std::size_t run,
                              const std::vector<std::vector<double>>& weights) {
    const auto data = draw_simulation_data(config, run);
    RunResult result;
    result.run = run;
    result.anomalies = static_cast<std::size_t>(
        std::count_if(data.test_class.begin(), data.test_class.end(), [](int c) { return c != 0; }));
    if (result.anomalies == 0 || result.anomalies == data.test_class.size()) {
        throw DataError("run " + std::to_string(run) + " drew a single-class test set");
    }

    const auto criteria = per_dimension_squared_diffs(config.dims);
    const auto model = train(data.training, criteria);
    result.pda_k = model.k();
    result.fronts = model.front_count();

    std::vector<double> pda_scores;
    pda_scores.reserve(data.test.size());
    for (const auto& x : data.test.samples) pda_scores.push_back(score(model, x).score);
    result.pda_auc = class_auc(pda_scores, data.test_class);

    if (!config.run_baselines) return result;

    // test_dists[t][l][j]: criterion-l dissimilarity of test t to training j.
    std::vector<std::vector<std::vector<double>>> test_dists;
    test_dists.reserve(data.test.size());
    for (const auto& x : data.test.samples) {
        std::vector<std::vector<double>> per_criterion;
        for (const auto& c : model.criteria()) {
            per_criterion.push_back(dissimilarities_to(data.training, c, x));
        }
        test_dists.push_back(std::move(per_criterion));
    }

    for (auto& per_method : result.baseline_auc) per_method.resize(weights.size());
    std::array<std::vector<double>, 4> method_scores;
    for (auto& s : method_scores) s.resize(data.test.size());
    for (std::size_t w = 0; w < weights.size(); ++w) {
        const auto combined = scalarize(model.matrices(), weights[w]);
        NeighborTable table(combined);
        const std::size_t k = config.baseline_k ? *config.baseline_k : select_k(table);
        const BaselineReference reference(table, k);
        for (std::size_t t = 0; t < data.test.size(); ++t) {
            const auto x = scalarize(test_dists[t], weights[w]);
            const auto s = reference.scores(x);
            for (std::size_t m = 0; m < 4; ++m) method_scores[m][t] = s[m];
        }
        for (std::size_t m = 0; m < 4; ++m) {
            result.baseline_auc[m][w] = class_auc(method_scores[m], data.test_class);
        }
    }
    return result;
}

ExperimentReport run_simulation(const SimulationConfig& config) {
    if (config.runs < 1) throw UsageError("simulation needs at least one run");
    ExperimentReport report;
    report.runs = config.runs;
    report.seed = config.seed;
    report.grid = config.grid;
    if (config.run_baselines) report.weights = grid_weights(config.dims, config.grid);

    report.per_run.resize(config.runs);
    parallel_for(config.runs, config.threads, [&](std::size_t run) {
        report.per_run[run] = run_simulation_once(config, run, report.weights);
    });

    std::vector<double> pda;
    for (const auto& r : report.per_run) pda.push_back(r.pda_auc);
    const auto pda_stats = mean_and_stderr(pda);
    report.pda_mean_auc = pda_stats.mean;
    report.pda_stderr = pda_stats.stderr_;
    report.stderr_defined = config.runs > 1;

    if (!config.run_baselines) return report;
    for (std::size_t m = 0; m < 4; ++m) {
        BaselineSummary summary;
        summary.method = kAllBaselines[m];
        for (std::size_t w = 0; w < report.weights.size(); ++w) {
            std::vector<double> values;
            values.reserve(config.runs);
            for (const auto& r : report.per_run) values.push_back(r.baseline_auc[m][w]);
            const auto stats = mean_and_stderr(values);
            summary.per_weight_mean.push_back(stats.mean);
            summary.per_weight_stderr.push_back(stats.stderr_);
        }
        std::vector<std::size_t> order(report.weights.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return summary.per_weight_mean[a] < summary.per_weight_mean[b];
        });
        const std::size_t mid = order.size() / 2;
        if (order.size() % 2 == 1) {
            summary.median_auc = summary.per_weight_mean[order[mid]];
            summary.median_stderr = summary.per_weight_stderr[order[mid]];
        } else {
            summary.median_auc =
                0.5 * (summary.per_weight_mean[order[mid - 1]] + summary.per_weight_mean[order[mid]]);
            summary.median_stderr =
                0.5 * (summary.per_weight_stderr[order[mid - 1]] + summary.per_weight_stderr[order[mid]]);
        }
        summary.best_weight = static_cast<std::size_t>(
            std::max_element(summary.per_weight_mean.begin(), summary.per_weight_mean.end()) -
            summary.per_weight_mean.begin());
        summary.best_auc = summary.per_weight_mean[summary.best_weight];
        summary.best_stderr = summary.per_weight_stderr[summary.best_weight];
        report.baselines.push_back(std::move(summary));
    }
    return report;
}

}  // namespace pda
