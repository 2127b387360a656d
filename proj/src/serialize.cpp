#include "pda/serialize.hpp"

#include "pda/errors.hpp"

namespace pda {

namespace {

template <typename T>
T field(const Json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(context + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(context + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback, const std::string& context) {
    if (!j.contains(key)) return fallback;
    return field<T>(j, key, context);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok |= key == k;
        if (!ok) throw ConfigError(context + ": unknown field '" + key + "'");
    }
}

struct CriterionJson {
    Json operator()(const SquaredDiffDim& c) const { return {{"type", "squared_diff_dim"}, {"dim", c.dim}}; }
    Json operator()(const AbsDiffDim& c) const { return {{"type", "abs_diff_dim"}, {"dim", c.dim}}; }
    Json operator()(const SquaredEuclidean& c) const {
        return {{"type", "squared_euclidean"}, {"dims", c.dims}};
    }
    Json operator()(const SpeedHistogram& c) const {
        Json j = {{"type", "speed_histogram"}, {"bins", c.bins}};
        if (c.range) j["range"] = {c.range->first, c.range->second};
        return j;
    }
    Json operator()(const ShapeResample& c) const {
        return {{"type", "shape_resample"}, {"points", c.points}};
    }
    Json operator()(const WeightedCombo& c) const {
        Json children = Json::array();
        for (const auto& child : c.children) children.push_back(criterion_to_json(child));
        return {{"type", "weighted_combo"}, {"weights", c.weights}, {"children", children}};
    }
};

Json upper_triangle(const DissimMatrix& m) {
    std::vector<double> upper;
    upper.reserve(pair_count(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) upper.push_back(m(i, j));
    }
    return upper;
}

DissimMatrix from_upper_triangle(std::size_t n, const std::vector<double>& upper, std::string id) {
    if (upper.size() != pair_count(n)) {
        throw ConfigError("model matrix '" + id + "' has " + std::to_string(upper.size()) +
                          " entries, expected " + std::to_string(pair_count(n)));
    }
    std::size_t next = 0;
    return DissimMatrix::from_pairs(n, std::move(id), [&](std::size_t, std::size_t) { return upper[next++]; });
}

}  // namespace

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(what + ": invalid JSON (" + e.what() + ")");
    }
}

Json criterion_to_json(const CriterionSpec& spec) { return std::visit(CriterionJson{}, spec.kind); }

CriterionSpec criterion_from_json(const Json& j) {
    const std::string ctx = "criterion";
    if (!j.is_object()) throw ConfigError("criterion must be a JSON object");
    const auto type = field<std::string>(j, "type", ctx);
    const std::string where = ctx + " '" + type + "'";
    if (type == "squared_diff_dim") {
        reject_unknown(j, {"type", "dim"}, where);
        return {SquaredDiffDim{field<std::size_t>(j, "dim", where)}};
    }
    if (type == "abs_diff_dim") {
        reject_unknown(j, {"type", "dim"}, where);
        return {AbsDiffDim{field<std::size_t>(j, "dim", where)}};
    }
    if (type == "squared_euclidean") {
        reject_unknown(j, {"type", "dims"}, where);
        return {SquaredEuclidean{field_or<std::vector<std::size_t>>(j, "dims", {}, where)}};
    }
    if (type == "speed_histogram") {
        reject_unknown(j, {"type", "bins", "range"}, where);
        SpeedHistogram h;
        h.bins = field_or<std::size_t>(j, "bins", h.bins, where);
        if (j.contains("range")) {
            const auto r = field<std::vector<double>>(j, "range", where);
            if (r.size() != 2) throw ConfigError(where + ": range must have two entries");
            h.range = std::pair{r[0], r[1]};
        }
        return {h};
    }
    if (type == "shape_resample") {
        reject_unknown(j, {"type", "points"}, where);
        return {ShapeResample{field_or<std::size_t>(j, "points", 100, where)}};
    }
    if (type == "weighted_combo") {
        reject_unknown(j, {"type", "weights", "children"}, where);
        WeightedCombo c;
        c.weights = field<std::vector<double>>(j, "weights", where);
        const auto& children = j.at("children");
        if (!children.is_array()) throw ConfigError(where + ": children must be an array");
        for (const auto& child : children) c.children.push_back(criterion_from_json(child));
        return {std::move(c)};
    }
    throw ConfigError("unknown criterion type '" + type + "'");
}

CriteriaConfig parse_criteria_config(const Json& j) {
    CriteriaConfig out;
    const Json* list = &j;
    if (j.is_object()) {
        reject_unknown(j, {"criteria", "k", "input_format"}, "criteria config");
        if (!j.contains("criteria")) throw ConfigError("criteria config: missing field 'criteria'");
        list = &j.at("criteria");
        if (j.contains("k")) out.k = field<std::vector<std::size_t>>(j, "k", "criteria config");
        const auto format = field_or<std::string>(j, "input_format", "table", "criteria config");
        if (format == "table") {
            out.input_format = InputFormat::table;
        } else if (format == "trajectories") {
            out.input_format = InputFormat::trajectories;
        } else {
            throw ConfigError("criteria config: input_format must be 'table' or 'trajectories'");
        }
    }
    if (!list->is_array() || list->empty()) {
        throw ConfigError("criteria config: expected a non-empty array of criteria");
    }
    for (const auto& c : *list) out.criteria.push_back(criterion_from_json(c));
    if (out.k && out.k->size() != out.criteria.size()) {
        throw ConfigError("criteria config: k has " + std::to_string(out.k->size()) + " entries for " +
                          std::to_string(out.criteria.size()) + " criteria");
    }
    return out;
}

CriteriaConfig read_criteria_config(const std::filesystem::path& path) {
    return parse_criteria_config(parse_json(read_file(path), path.string()));
}

Json metadata_to_json(const OutputMetadata& meta) {
    Json j = {{"tool", std::string(kToolName)}, {"version", std::string(kToolVersion)}, {"command", meta.command},
              {"config_digest", config_digest(meta.config)}};
    j["seed"] = meta.seed ? Json(*meta.seed) : Json(nullptr);
    return j;
}

Json model_to_json(const PdaModel& model, const OutputMetadata& meta) {
    Json j;
    j["format"] = "pda-model";
    j["version"] = kModelFormatVersion;
    j["metadata"] = metadata_to_json(meta);
    j["column_names"] = model.training().column_names;
    Json samples = Json::array();
    for (const auto& s : model.training().samples) samples.push_back(s.features);
    j["training"] = std::move(samples);
    Json criteria = Json::array();
    for (const auto& c : model.criteria()) criteria.push_back(criterion_to_json(c));
    j["criteria"] = std::move(criteria);
    j["k"] = model.k();
    Json matrices = Json::array();
    for (const auto& m : model.matrices()) {
        matrices.push_back({{"id", m.criterion_id()}, {"upper", upper_triangle(m)}});
    }
    j["matrices"] = std::move(matrices);
    j["depth_of"] = model.fronts().depth_of;
    return j;
}

PdaModel model_from_json(const Json& j) {
    const std::string ctx = "model";
    if (field<std::string>(j, "format", ctx) != "pda-model") throw ConfigError("not a pda model file");
    const int version = field<int>(j, "version", ctx);
    if (version != kModelFormatVersion) {
        throw ConfigError("unsupported model version " + std::to_string(version));
    }

    Dataset training;
    training.column_names = field_or<std::vector<std::string>>(j, "column_names", {}, ctx);
    for (auto& f : field<std::vector<std::vector<double>>>(j, "training", ctx)) {
        training.samples.emplace_back(std::move(f));
    }
    const std::size_t n = training.size();

    if (!j.at("criteria").is_array()) throw ConfigError("model: criteria must be an array");
    std::vector<CriterionSpec> criteria;
    for (const auto& c : j.at("criteria")) criteria.push_back(criterion_from_json(c));

    if (!j.contains("matrices") || !j.at("matrices").is_array()) {
        throw ConfigError("model: missing matrices");
    }
    std::vector<DissimMatrix> matrices;
    for (const auto& m : j.at("matrices")) {
        matrices.push_back(from_upper_triangle(n, field<std::vector<double>>(m, "upper", "model matrix"),
                                               field<std::string>(m, "id", "model matrix")));
    }
    if (matrices.size() != criteria.size()) throw ConfigError("model: one matrix per criterion expected");

    auto k = field<std::vector<std::size_t>>(j, "k", ctx);
    auto depth_of = field<std::vector<std::uint32_t>>(j, "depth_of", ctx);
    try {
        const auto dyads = build_dyads(matrices);
        // The stored partition is an integrity check against the matrices.
        auto fronts = non_dominated_sort(dyads.points());
        if (fronts.depth_of != depth_of) throw ConfigError("model fronts do not match its dyads");
        return PdaModel(std::move(training), std::move(criteria), std::move(matrices), std::move(k),
                        std::move(fronts));
    } catch (const UsageError& e) {
        throw ConfigError(std::string("model is inconsistent: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const PdaModel& model, const OutputMetadata& meta) {
    write_file_atomic(path, model_to_json(model, meta).dump() + "\n");
}

PdaModel load_model(const std::filesystem::path& path) {
    return model_from_json(parse_json(read_file(path), path.string()));
}

Json report_to_json(const ExperimentReport& report, const OutputMetadata& meta) {
    Json j;
    j["metadata"] = metadata_to_json(meta);
    j["runs"] = report.runs;
    j["seed"] = report.seed;
    j["grid"] = report.grid;
    j["pda"] = {{"mean_auc", report.pda_mean_auc},
                {"stderr", report.stderr_defined ? Json(report.pda_stderr) : Json(nullptr)}};
    Json baselines = Json::object();
    for (const auto& b : report.baselines) {
        baselines[std::string(to_string(b.method))] = {
            {"median_auc", b.median_auc},
            {"median_stderr", b.median_stderr},
            {"best_auc", b.best_auc},
            {"best_stderr", b.best_stderr},
            {"best_weights", report.weights[b.best_weight]},
            {"per_weight_mean", b.per_weight_mean},
        };
    }
    j["baselines"] = std::move(baselines);
    j["weights"] = report.weights;
    return j;
}

Json theory_fit_to_json(const TheoryRun& run, const OutputMetadata& meta) {
    Json j;
    j["metadata"] = metadata_to_json(meta);
    j["domain"] = std::string(to_string(run.domain));
    j["trials"] = run.trials;
    j["seed"] = run.seed;
    j["n_grid"] = run.n_grid;
    j["fit"] = {{"model", run.fit.model},       {"alpha", run.fit.alpha},
                {"beta", run.fit.beta},         {"intercept", run.fit.intercept},
                {"slope", run.fit.slope},       {"rms_residual", run.fit.rms_residual}};
    return j;
}

}  // namespace pda
