#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pda/baselines.hpp"
#include "pda/detector.hpp"
#include "pda/errors.hpp"
#include "pda/io.hpp"
#include "pda/nds.hpp"
#include "pda/neighbors.hpp"
#include "pda/parallel.hpp"
#include "pda/rng.hpp"
#include "pda/roc.hpp"
#include "pda/serialize.hpp"
#include "pda/simulation.hpp"
#include "pda/theory.hpp"

namespace fs = std::filesystem;
using namespace pda;

namespace {

struct CommonOptions {
    std::size_t threads = 0;
    char delimiter = ',';
    std::string header = "auto";
};

CsvOptions csv_options(const CommonOptions& common) {
    CsvOptions o;
    o.delimiter = common.delimiter;
    if (common.header == "yes") {
        o.header = HeaderMode::present;
    } else if (common.header == "no") {
        o.header = HeaderMode::absent;
    } else {
        o.header = HeaderMode::detect;
    }
    return o;
}

void require_file(const std::string& path, const char* flag) {
    if (!fs::is_regular_file(path)) throw ConfigError(std::string(flag) + ": no such file '" + path + "'");
}

std::string sibling(const std::string& out, const std::string& suffix) {
    fs::path p(out);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

Dataset load_samples(const std::string& path, InputFormat format, const CsvOptions& csv,
                     std::optional<std::vector<int>>* labels = nullptr) {
    if (format == InputFormat::trajectories) return read_trajectory_dataset(path, csv);
    auto table = read_table_dataset(path, csv);
    if (labels) *labels = std::move(table.labels);
    return std::move(table.data);
}

InputFormat parse_format(const std::string& name) {
    if (name == "table") return InputFormat::table;
    if (name == "trajectories") return InputFormat::trajectories;
    throw UsageError("input format must be 'table' or 'trajectories'");
}

std::string format_name(InputFormat f) { return f == InputFormat::table ? "table" : "trajectories"; }

// ---- train --------------------------------------------------------------------

struct TrainArgs {
    std::string input, criteria, out, front_dump;
    std::vector<std::size_t> k;
    std::uint64_t seed = 0;
};

int run_train(const TrainArgs& a, const CommonOptions& common) {
    require_file(a.input, "--input");
    require_file(a.criteria, "--criteria");
    auto config = read_criteria_config(a.criteria);
    TrainOptions options;
    if (!a.k.empty()) {
        options.k_override = a.k;
    } else if (config.k) {
        options.k_override = config.k;
    }
    const auto data = load_samples(a.input, config.input_format, csv_options(common));
    const auto model = train(data, config.criteria, options);

    Json canonical = {{"criteria", Json::array()}, {"input", fs::path(a.input).filename().string()},
                      {"k", model.k()}, {"input_format", format_name(config.input_format)}};
    for (const auto& c : config.criteria) canonical["criteria"].push_back(criterion_to_json(c));
    const OutputMetadata meta{"train", a.seed, canonical.dump()};

    auto j = model_to_json(model, meta);
    j["input_format"] = format_name(config.input_format);
    write_file_atomic(a.out, j.dump() + "\n");
    if (!a.front_dump.empty()) {
        write_file_atomic(a.front_dump, front_dump_csv(model.dyads(), model.fronts(), meta));
    }
    std::cerr << "trained on " << data.size() << " samples, " << model.dyads().size() << " dyads, "
              << model.front_count() << " fronts\n";
    return 0;
}

// ---- score --------------------------------------------------------------------

struct ScoreArgs {
    std::string model, input, out, rule = "scan";
    std::optional<double> threshold;
    std::uint64_t seed = 0;
};

DepthRule parse_rule(const std::string& name) {
    if (name == "scan") return DepthRule::below_scan;
    if (name == "bisect") return DepthRule::below_bisect;
    if (name == "insertion") return DepthRule::insertion;
    throw UsageError("depth rule must be scan, bisect or insertion");
}

int run_score(const ScoreArgs& a, const CommonOptions& common) {
    require_file(a.model, "--model");
    require_file(a.input, "--input");
    const auto rule = parse_rule(a.rule);
    const auto model_json = parse_json(read_file(a.model), a.model);
    const auto format = parse_format(model_json.value("input_format", std::string("table")));
    const auto model = model_from_json(model_json);
    const auto data = load_samples(a.input, format, csv_options(common));

    std::vector<ScoreReport> reports(data.size());
    parallel_for(data.size(), common.threads,
                 [&](std::size_t i) { reports[i] = score(model, data[i], a.threshold, rule); });

    Json canonical = {{"model_digest", config_digest(read_file(a.model))},
                      {"input", fs::path(a.input).filename().string()},
                      {"rule", a.rule},
                      {"threshold", a.threshold ? Json(*a.threshold) : Json(nullptr)}};
    std::string out = csv_metadata_line({"score", a.seed, canonical.dump()});
    out += csv_row({"sample_index", "score", "depths_json", "is_anomaly"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        std::string anomaly;
        if (r.is_anomaly) anomaly = *r.is_anomaly ? "true" : "false";
        out += csv_row({std::to_string(i), format_double(r.score), Json(r.depths).dump(), anomaly});
    }
    write_file_atomic(a.out, out);
    return 0;
}

// ---- baseline -----------------------------------------------------------------

struct BaselineArgs {
    std::string method = "knn_dist", input, test, criteria, out;
    std::size_t grid = 6;
    std::optional<std::size_t> k;
    std::uint64_t seed = 0;
};

int run_baseline(const BaselineArgs& a, const CommonOptions& common) {
    require_file(a.input, "--input");
    require_file(a.test, "--test");
    const auto method = parse_baseline_method(a.method);
    const auto csv = csv_options(common);

    CriteriaConfig config;
    if (!a.criteria.empty()) {
        require_file(a.criteria, "--criteria");
        config = read_criteria_config(a.criteria);
    }
    if (config.input_format == InputFormat::trajectories) {
        throw UsageError("baseline: trajectory inputs are not supported; test files carry labels per row");
    }
    const auto training = load_samples(a.input, config.input_format, csv);
    std::optional<std::vector<int>> labels;
    const auto test = load_samples(a.test, InputFormat::table, csv, &labels);
    if (!labels) throw DataError(a.test + ": a 'label' column is required");
    if (config.criteria.empty()) config.criteria = per_dimension_squared_diffs(training[0].features.size());

    std::vector<CriterionSpec> resolved;
    std::vector<DissimMatrix> matrices;
    for (const auto& c : config.criteria) {
        resolved.push_back(resolve_criterion(c, training));
        matrices.push_back(pairwise_dissimilarities(training, resolved.back()));
    }
    std::vector<std::vector<std::vector<double>>> test_dists(test.size());
    parallel_for(test.size(), common.threads, [&](std::size_t t) {
        for (const auto& c : resolved) test_dists[t].push_back(dissimilarities_to(training, c, test[t]));
    });

    const auto weights = grid_weights(resolved.size(), a.grid);
    struct Row {
        std::size_t k = 0;
        double auc = 0.0;
    };
    std::vector<Row> rows(weights.size());
    parallel_for(weights.size(), common.threads, [&](std::size_t w) {
        const auto combined = scalarize(matrices, weights[w]);
        NeighborTable table(combined);
        const std::size_t k = a.k ? *a.k : select_k(table);
        const BaselineReference reference(table, k);
        std::vector<double> nominal, anomalous;
        for (std::size_t t = 0; t < test.size(); ++t) {
            const double s = reference.score(method, scalarize(test_dists[t], weights[w]));
            ((*labels)[t] == 0 ? nominal : anomalous).push_back(s);
        }
        rows[w] = {k, auc(nominal, anomalous).auc};
    });

    Json canonical = {{"method", a.method},
                      {"grid", a.grid},
                      {"k", a.k ? Json(*a.k) : Json(nullptr)},
                      {"input", fs::path(a.input).filename().string()},
                      {"test", fs::path(a.test).filename().string()},
                      {"criteria", Json::array()}};
    for (const auto& c : config.criteria) canonical["criteria"].push_back(criterion_to_json(c));
    std::string out = csv_metadata_line({"baseline", a.seed, canonical.dump()});
    std::vector<std::string> header{"method"};
    for (std::size_t l = 0; l < resolved.size(); ++l) header.push_back("w" + std::to_string(l + 1));
    header.insert(header.end(), {"k", "auc"});
    out += csv_row(header);
    for (std::size_t w = 0; w < weights.size(); ++w) {
        std::vector<std::string> row{a.method};
        for (double v : weights[w]) row.push_back(format_double(v));
        row.push_back(std::to_string(rows[w].k));
        row.push_back(format_double(rows[w].auc));
        out += csv_row(row);
    }
    write_file_atomic(a.out, out);
    return 0;
}

// ---- simulate -----------------------------------------------------------------

struct SimulateArgs {
    SimulationConfig config;
    std::string out, runs_csv;
    bool no_baselines = false;
};

int run_simulate(SimulateArgs a, const CommonOptions& common) {
    a.config.threads = common.threads;
    a.config.run_baselines = !a.no_baselines;
    const auto report = run_simulation(a.config);

    const auto& c = a.config;
    Json canonical = {{"runs", c.runs},
                      {"seed", c.seed},
                      {"grid", c.grid},
                      {"n_train", c.n_train},
                      {"n_test", c.n_test},
                      {"dims", c.dims},
                      {"anomaly_probability", c.anomaly_probability},
                      {"anomaly_range", {c.anomaly_low, c.anomaly_high}},
                      {"baselines", c.run_baselines},
                      {"baseline_k", c.baseline_k ? Json(*c.baseline_k) : Json(nullptr)}};
    const OutputMetadata meta{"simulate", c.seed, canonical.dump()};
    write_file_atomic(a.out, report_to_json(report, meta).dump(2) + "\n");

    std::string csv = csv_metadata_line(meta);
    std::vector<std::string> header{"run", "anomalies", "fronts", "pda_auc"};
    for (const auto& b : report.baselines) header.push_back(std::string(to_string(b.method)) + "_best_weight_auc");
    csv += csv_row(header);
    for (const auto& r : report.per_run) {
        std::vector<std::string> row{std::to_string(r.run), std::to_string(r.anomalies),
                                     std::to_string(r.fronts), format_double(r.pda_auc)};
        for (std::size_t m = 0; m < report.baselines.size(); ++m) {
            row.push_back(format_double(r.baseline_auc[m][report.baselines[m].best_weight]));
        }
        csv += csv_row(row);
    }
    write_file_atomic(a.runs_csv.empty() ? sibling(a.out, "_runs.csv") : a.runs_csv, csv);

    std::cerr << "PDA mean AUC " << report.pda_mean_auc << " over " << report.runs << " runs\n";
    return 0;
}

// ---- theory -------------------------------------------------------------------

struct TheoryArgs {
    std::string domain = "box", out, fit_out;
    double n_min = 0.0, n_max = 1e6;
    std::size_t points = 16, trials = 50;
    std::uint64_t seed = 7;
};

int run_theory(const TheoryArgs& a, const CommonOptions& common) {
    const auto domain = parse_theory_domain(a.domain);
    const double n_min = a.n_min > 0.0 ? a.n_min : (domain == TheoryDomain::iid_box ? 10.0 : 1e3);
    if (!(a.n_max >= n_min)) throw UsageError("--n-max must be at least the grid start");
    TheoryConfig config{domain, sample_counts_for(domain, n_min, a.n_max, a.points), a.trials, a.seed,
                        common.threads};
    const auto run = run_theory_experiment(config);

    Json canonical = {{"domain", a.domain}, {"n_min", n_min},   {"n_max", a.n_max},
                      {"points", a.points}, {"trials", a.trials}, {"seed", a.seed}};
    const OutputMetadata meta{"theory", a.seed, canonical.dump()};
    std::string csv = csv_metadata_line(meta);
    csv += csv_row({"n", "samples", "mean_F", "mean_L", "mean_FminusL", "stderr_F", "stderr_FminusL"});
    for (std::size_t s = 0; s < run.n_grid.size(); ++s) {
        csv += csv_row({std::to_string(run.n_grid[s]), std::to_string(run.sample_counts[s]),
                        format_double(run.mean_front[s]), format_double(run.mean_scalarizable[s]),
                        format_double(run.mean_unattainable[s]), format_double(run.stderr_front[s]),
                        format_double(run.stderr_unattainable[s])});
    }
    write_file_atomic(a.out, csv);
    write_file_atomic(a.fit_out.empty() ? sibling(a.out, "_fit.json") : a.fit_out,
                      theory_fit_to_json(run, meta).dump(2) + "\n");
    return 0;
}

// ---- sort-bench ---------------------------------------------------------------

struct SortBenchArgs {
    std::size_t n = 100000, k = 2, repeats = 1;
    std::vector<std::string> algos{"fast2d", "deb"};
    std::uint64_t seed = 1;
    std::string out;
};

int run_sort_bench(const SortBenchArgs& a) {
    if (a.n < 1 || a.k < 1 || a.repeats < 1) throw UsageError("--n, --k and --repeats must be positive");
    for (const auto& algo : a.algos) {
        if (algo != "fast2d" && algo != "deb" && algo != "low_memory") {
            throw UsageError("unknown algorithm '" + algo + "' (expected fast2d, deb or low_memory)");
        }
        if (algo == "fast2d" && a.k != 2) throw UsageError("fast2d needs --k 2");
    }
    Rng rng(derive_seed(a.seed, 0));
    std::vector<double> values(a.n * a.k);
    for (auto& v : values) v = rng.uniform();
    const PointSet points(a.k, std::move(values));

    Json canonical = {{"n", a.n}, {"k", a.k}, {"algos", a.algos}, {"seed", a.seed}, {"repeats", a.repeats}};
    std::string csv = csv_metadata_line({"sort-bench", a.seed, canonical.dump()});
    csv += csv_row({"algo", "n", "k", "millis", "fronts"});
    for (const auto& algo : a.algos) {
        double best = INFINITY;
        std::size_t fronts = 0;
        for (std::size_t r = 0; r < a.repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            FrontAssignment result;
            if (algo == "fast2d") {
                result = nds_fast_2d(points);
            } else {
                NdsOptions o;
                o.strategy = algo == "deb" ? GeneralSortStrategy::automatic : GeneralSortStrategy::low_memory;
                result = nds_general(points, o);
            }
            best = std::min(best, std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - t0).count());
            fronts = result.front_count();
        }
        csv += csv_row({algo, std::to_string(a.n), std::to_string(a.k), format_double(best),
                        std::to_string(fronts)});
    }
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        write_file_atomic(a.out, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pareto depth analysis: multi-criteria anomaly detection toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions common;
    app.add_option("--threads", common.threads, "Worker threads (0 = all available cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--delimiter", common.delimiter, "Input CSV field delimiter");
    app.add_option("--header", common.header, "Input CSV header row: auto, yes or no")
        ->check(CLI::IsMember({"auto", "yes", "no"}));

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Build dyads and Pareto fronts from training data");
    train_cmd->add_option("--input", train_args.input, "Training CSV (table or trajectory rows)")->required();
    train_cmd->add_option("--criteria", train_args.criteria, "Criteria JSON file")->required();
    train_cmd->add_option("--out", train_args.out, "Model file to write")->required();
    train_cmd->add_option("--k", train_args.k, "Neighbor count per criterion (overrides selection)");
    train_cmd->add_option("--front-dump", train_args.front_dump, "Optional CSV of every dyad and its front");
    train_cmd->add_option("--seed", train_args.seed, "Seed recorded in output metadata");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "Score test samples against a trained model");
    score_cmd->add_option("--model", score_args.model, "Model file from 'train'")->required();
    score_cmd->add_option("--input", score_args.input, "Test CSV")->required();
    score_cmd->add_option("--out", score_args.out, "Scores CSV to write")->required();
    score_cmd->add_option("--threshold", score_args.threshold, "Flag samples whose score exceeds this");
    score_cmd->add_option("--depth-rule", score_args.rule, "scan (exact), bisect or insertion")
        ->check(CLI::IsMember({"scan", "bisect", "insertion"}));
    score_cmd->add_option("--seed", score_args.seed, "Seed recorded in output metadata");

    BaselineArgs base_args;
    auto* base_cmd = app.add_subcommand("baseline", "Grid-search a nearest-neighbor baseline");
    base_cmd->add_option("--method", base_args.method, "knn_dist, knn_sum, lof or klpe")
        ->check(CLI::IsMember({"knn_dist", "knn_sum", "lof", "klpe"}));
    base_cmd->add_option("--weights-grid", base_args.grid, "Grid points per weight axis")
        ->check(CLI::Range(2, 1000));
    base_cmd->add_option("--input", base_args.input, "Training CSV")->required();
    base_cmd->add_option("--test", base_args.test, "Test CSV with a 'label' column")->required();
    base_cmd->add_option("--criteria", base_args.criteria,
                         "Criteria JSON (default: squared difference per column)");
    base_cmd->add_option("--k", base_args.k, "Fixed k (default: k-NN graph connectivity)");
    base_cmd->add_option("--out", base_args.out, "AUC CSV, one row per weight vector")->required();
    base_cmd->add_option("--seed", base_args.seed, "Seed recorded in output metadata");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Hypercube benchmark: PDA against grid-searched baselines");
    sim_cmd->add_option("--runs", sim_args.config.runs, "Independent runs")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_args.config.seed, "Base seed");
    sim_cmd->add_option("--grid", sim_args.config.grid, "Weight grid points per axis")
        ->check(CLI::Range(2, 100));
    sim_cmd->add_option("--n-train", sim_args.config.n_train, "Training samples per run")
        ->check(CLI::Range(3, 100000));
    sim_cmd->add_option("--n-test", sim_args.config.n_test, "Test samples per run")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_option("--baseline-k", sim_args.config.baseline_k, "Fixed baseline k");
    sim_cmd->add_flag("--no-baselines", sim_args.no_baselines, "Run PDA only");
    sim_cmd->add_option("--out", sim_args.out, "Report JSON")->required();
    sim_cmd->add_option("--runs-csv", sim_args.runs_csv, "Per-run CSV (default: <out>_runs.csv)");

    TheoryArgs th_args;
    auto* th_cmd = app.add_subcommand("theory", "Monte-Carlo front statistics and growth fits");
    th_cmd->add_option("--domain", th_args.domain, "box, diamond or iid")
        ->check(CLI::IsMember({"box", "diamond", "iid"}));
    th_cmd->add_option("--n-min", th_args.n_min, "Smallest item count (default 1e3, iid 10)");
    th_cmd->add_option("--n-max", th_args.n_max, "Largest item count (dyads, or points for iid)");
    th_cmd->add_option("--points", th_args.points, "Grid steps, log-spaced")->check(CLI::Range(2, 10000));
    th_cmd->add_option("--trials", th_args.trials, "Trials per grid")->check(CLI::PositiveNumber);
    th_cmd->add_option("--seed", th_args.seed, "Base seed");
    th_cmd->add_option("--out", th_args.out, "Growth CSV")->required();
    th_cmd->add_option("--fit-out", th_args.fit_out, "Fit JSON (default: <out>_fit.json)");

    SortBenchArgs sb_args;
    auto* sb_cmd = app.add_subcommand("sort-bench", "Time non-dominated sorting on uniform points");
    sb_cmd->add_option("--n", sb_args.n, "Points")->check(CLI::PositiveNumber);
    sb_cmd->add_option("--k", sb_args.k, "Criteria")->check(CLI::PositiveNumber);
    sb_cmd->add_option("--algo", sb_args.algos, "fast2d, deb, low_memory")->delimiter(',');
    sb_cmd->add_option("--repeats", sb_args.repeats, "Timed repetitions (best is kept)");
    sb_cmd->add_option("--seed", sb_args.seed, "Seed for the point draw");
    sb_cmd->add_option("--out", sb_args.out, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*train_cmd) return run_train(train_args, common);
        if (*score_cmd) return run_score(score_args, common);
        if (*base_cmd) return run_baseline(base_args, common);
        if (*sim_cmd) return run_simulate(sim_args, common);
        if (*th_cmd) return run_theory(th_args, common);
        if (*sb_cmd) return run_sort_bench(sb_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
