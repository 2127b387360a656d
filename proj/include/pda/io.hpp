#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pda/core.hpp"
#include "pda/nds.hpp"

namespace pda {

inline constexpr std::string_view kToolName = "pda";
inline constexpr std::string_view kToolVersion = "0.1.0";

// ---- CSV --------------------------------------------------------------------

/// Raw fields of a delimited text file. Lines starting with '#' and blank
/// lines are skipped; quoted fields may contain delimiters, doubled quotes
/// and newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

enum class HeaderMode { detect, present, absent };

struct CsvOptions {
    char delimiter = ',';
    /// `detect` treats the first row as a header when any field of it is not
    /// a number.
    HeaderMode header = HeaderMode::detect;
};

/// Throws DataError on malformed quoting or ragged rows.
CsvTable parse_csv(std::string_view text, const CsvOptions& options = {});
CsvTable read_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Strict finite decimal parse; throws DataError naming `where` otherwise.
double parse_number(std::string_view field, std::string_view where);

/// A numeric table with an optional integer label column split off.
struct LabeledDataset {
    Dataset data;
    /// Present when the label column exists: 0 nominal, nonzero anomalous.
    std::optional<std::vector<int>> labels;
};

/// One sample per row, every column numeric except `label_column` (if the
/// header has it). Throws DataError on non-numeric or non-finite fields.
LabeledDataset read_table_dataset(const std::filesystem::path& path, const CsvOptions& options = {},
                                  std::string_view label_column = "label");

/// Rows (traj_id, t, x, y) grouped by traj_id in first-appearance order and
/// sorted by t; each trajectory becomes one sample of interleaved x, y.
/// Requires a header naming those four columns.
Dataset read_trajectory_dataset(const std::filesystem::path& path, const CsvOptions& options = {});

/// RFC-4180 quoting: fields holding the delimiter, a quote, CR or LF are
/// wrapped in quotes with inner quotes doubled.
std::string csv_escape(std::string_view field, char delimiter = ',');
std::string csv_row(const std::vector<std::string>& fields, char delimiter = ',');

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// ---- Output files -----------------------------------------------------------

/// Provenance embedded in every output file. Deliberately free of clocks and
/// host details so equal runs give byte-identical files.
struct OutputMetadata {
    std::string command;
    std::optional<std::uint64_t> seed;
    /// Canonical text of the run configuration; only its digest is written.
    std::string config;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string config_digest(std::string_view config);

/// "# pda 0.1.0 command=... seed=... config=fnv1a64:..." followed by '\n'.
std::string csv_metadata_line(const OutputMetadata& meta);

/// Writes via a sibling temporary file and rename, so readers never see a
/// partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Columns dyad_index, i, j, c1..cK, front.
std::string front_dump_csv(const DyadSet& dyads, const FrontAssignment& fronts,
                           const OutputMetadata& meta);

}  // namespace pda
