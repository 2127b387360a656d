#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pda/baselines.hpp"
#include "pda/core.hpp"
#include "pda/detector.hpp"

namespace pda {

/// Four-criteria hypercube benchmark. Nominal samples are uniform on
/// [0,1]^dims; anomalous class c replaces coordinate c with a draw from
/// [anomaly_low, anomaly_high]. Each test sample independently belongs to
/// class c with probability anomaly_probability (per class) and is nominal
/// otherwise. Criteria are squared differences per dimension.
struct SimulationConfig {
    std::size_t runs = 100;
    std::uint64_t seed = 42;
    std::size_t grid = 6;
    std::size_t n_train = 300;
    std::size_t n_test = 100;
    std::size_t dims = 4;
    double anomaly_probability = 0.05;
    double anomaly_low = 1.0;
    double anomaly_high = 1.1;
    bool run_baselines = true;
    /// Fixed baseline k; chosen per weight by k-NN graph connectivity if absent.
    std::optional<std::size_t> baseline_k;
    std::size_t threads = 0;
};

struct SimulationData {
    Dataset training;
    Dataset test;
    /// 0 for nominal, c + 1 for anomalous class c.
    std::vector<int> test_class;
};

/// Draws run `run` of the benchmark. Training uses stream (seed, run, 0) and
/// test uses stream (seed, run, 1).
SimulationData draw_simulation_data(const SimulationConfig& config, std::size_t run);

struct RunResult {
    std::size_t run = 0;
    std::size_t anomalies = 0;
    double pda_auc = 0.0;
    std::vector<std::size_t> pda_k;
    std::size_t fronts = 0;
    /// AUC per weight vector, indexed like ExperimentReport::weights.
    std::array<std::vector<double>, 4> baseline_auc;
};

struct BaselineSummary {
    BaselineMethod method = BaselineMethod::knn_dist;
    /// Mean AUC over runs for each weight vector.
    std::vector<double> per_weight_mean;
    std::vector<double> per_weight_stderr;
    double median_auc = 0.0;
    double median_stderr = 0.0;
    double best_auc = 0.0;
    double best_stderr = 0.0;
    std::size_t best_weight = 0;
};

struct ExperimentReport {
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::size_t grid = 0;
    double pda_mean_auc = 0.0;
    double pda_stderr = 0.0;
    /// False for a single run: the standard error is reported as 0.
    bool stderr_defined = false;
    std::vector<std::vector<double>> weights;
    std::vector<BaselineSummary> baselines;
    std::vector<RunResult> per_run;

    [[nodiscard]] const BaselineSummary& baseline(BaselineMethod method) const;
};

/// One run: PDA with connectivity-selected k per criterion, and every
/// baseline on every grid weight. Throws DataError if the test draw has a
/// single class.
RunResult run_simulation_once(const SimulationConfig& config, std::size_t run,
                              const std::vector<std::vector<double>>& weights);

/// Runs are independent and may execute in parallel; aggregation is in run
/// order so the report does not depend on the thread count.
ExperimentReport run_simulation(const SimulationConfig& config);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample mean and std / sqrt(n) (0 when n < 2).
MeanStderr mean_and_stderr(const std::vector<double>& values);

}  // namespace pda
