#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pda/detector.hpp"
#include "pda/dissim.hpp"
#include "pda/io.hpp"
#include "pda/simulation.hpp"
#include "pda/theory.hpp"

namespace pda {

using Json = nlohmann::json;

/// {"type": "squared_diff_dim", "dim": 0}, {"type": "speed_histogram",
/// "bins": 10, "range": [0, 2]}, {"type": "weighted_combo", "weights": [...],
/// "children": [...]}, and so on. Throws ConfigError on unknown types or
/// missing fields.
Json criterion_to_json(const CriterionSpec& spec);
CriterionSpec criterion_from_json(const Json& j);

enum class InputFormat { table, trajectories };

/// Contents of a criteria file: either a bare array of criteria or an object
/// {"criteria": [...], "k": [...], "input_format": "table"|"trajectories"}.
struct CriteriaConfig {
    std::vector<CriterionSpec> criteria;
    std::optional<std::vector<std::size_t>> k;
    InputFormat input_format = InputFormat::table;
};

CriteriaConfig parse_criteria_config(const Json& j);
CriteriaConfig read_criteria_config(const std::filesystem::path& path);

Json metadata_to_json(const OutputMetadata& meta);

/// Structured-text model: format tag, version, metadata, training samples,
/// resolved criteria, upper triangles of the matrices, k, and each dyad's
/// front index. Loading rebuilds dyads and checks the front partition.
Json model_to_json(const PdaModel& model, const OutputMetadata& meta);
PdaModel model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const PdaModel& model, const OutputMetadata& meta);
PdaModel load_model(const std::filesystem::path& path);

inline constexpr int kModelFormatVersion = 1;

Json report_to_json(const ExperimentReport& report, const OutputMetadata& meta);
Json theory_fit_to_json(const TheoryRun& run, const OutputMetadata& meta);

/// Parses JSON text; throws ConfigError with `what` on syntax errors.
Json parse_json(const std::string& text, const std::string& what);

}  // namespace pda
