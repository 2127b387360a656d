#include "pda/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "pda/errors.hpp"

namespace pda {

namespace {

bool looks_numeric(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string where(const std::filesystem::path& path, std::size_t row, std::size_t col) {
    return path.string() + " row " + std::to_string(row + 1) + " column " + std::to_string(col + 1);
}

std::size_t column_index(const std::vector<std::string>& header, std::string_view name,
                         const std::filesystem::path& path) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError(path.string() + ": missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

CsvTable parse_csv(std::string_view text, const CsvOptions& options) {
    const char delim = options.delimiter;
    if (delim == '"' || delim == '\n' || delim == '\r') throw UsageError("invalid CSV delimiter");

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    bool at_line_start = true;
    std::size_t line = 1;

    auto end_record = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_quoted = false;
        const bool blank = record.size() == 1 && record[0].empty();
        if (!blank) records.push_back(std::move(record));
        record.clear();
        at_line_start = true;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (at_line_start && c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            ++line;
            continue;
        }
        at_line_start = false;
        if (c == '"') {
            if (!field.empty() || field_quoted) {
                throw DataError("CSV line " + std::to_string(line) + ": stray quote inside a field");
            }
            in_quotes = true;
            field_quoted = true;
        } else if (c == delim) {
            record.push_back(std::move(field));
            field.clear();
            field_quoted = false;
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            end_record();
            ++line;
        } else if (c == '\n') {
            end_record();
            ++line;
        } else {
            if (field_quoted) {
                throw DataError("CSV line " + std::to_string(line) + ": text after closing quote");
            }
            field.push_back(c);
        }
    }
    if (in_quotes) throw DataError("CSV: unterminated quoted field");
    if (!field.empty() || field_quoted || !record.empty()) end_record();

    CsvTable table;
    if (records.empty()) return table;
    const std::size_t width = records.front().size();
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (records[r].size() != width) {
            throw DataError("CSV record " + std::to_string(r + 1) + " has " +
                            std::to_string(records[r].size()) + " fields, expected " +
                            std::to_string(width));
        }
    }
    bool has_header = options.header == HeaderMode::present;
    if (options.header == HeaderMode::detect) {
        has_header = std::any_of(records.front().begin(), records.front().end(),
                                 [](const std::string& f) { return !looks_numeric(f); });
    }
    auto first = records.begin();
    if (has_header) {
        table.header = std::move(records.front());
        ++first;
    }
    table.rows.assign(std::make_move_iterator(first), std::make_move_iterator(records.end()));
    return table;
}

CsvTable read_csv(const std::filesystem::path& path, const CsvOptions& options) {
    try {
        return parse_csv(read_file(path), options);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

double parse_number(std::string_view field, std::string_view where_text) {
    std::string_view s = field;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(std::string(where_text) + ": '" + std::string(field) + "' is not a number");
    }
    if (!std::isfinite(v)) {
        throw DataError(std::string(where_text) + ": non-finite value '" + std::string(field) + "'");
    }
    return v;
}

LabeledDataset read_table_dataset(const std::filesystem::path& path, const CsvOptions& options,
                                  std::string_view label_column) {
    const auto table = read_csv(path, options);
    if (table.rows.empty()) throw DataError(path.string() + ": no data rows");

    std::optional<std::size_t> label_at;
    if (!label_column.empty()) {
        const auto it = std::find(table.header.begin(), table.header.end(), label_column);
        if (it != table.header.end()) label_at = static_cast<std::size_t>(it - table.header.begin());
    }

    LabeledDataset out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c != label_at) out.data.column_names.push_back(table.header[c]);
    }
    if (label_at) out.labels.emplace();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<double> features;
        features.reserve(table.rows[r].size());
        for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
            const double v = parse_number(table.rows[r][c], where(path, r, c));
            if (c == label_at) {
                if (v != std::floor(v)) throw DataError(where(path, r, c) + ": label is not an integer");
                out.labels->push_back(static_cast<int>(v));
            } else {
                features.push_back(v);
            }
        }
        if (features.empty()) throw DataError(path.string() + ": no feature columns");
        out.data.samples.emplace_back(std::move(features));
    }
    return out;
}

Dataset read_trajectory_dataset(const std::filesystem::path& path, const CsvOptions& options) {
    CsvOptions with_header = options;
    with_header.header = HeaderMode::present;
    const auto table = read_csv(path, with_header);
    const std::size_t id_col = column_index(table.header, "traj_id", path);
    const std::size_t t_col = column_index(table.header, "t", path);
    const std::size_t x_col = column_index(table.header, "x", path);
    const std::size_t y_col = column_index(table.header, "y", path);

    struct Step {
        double t, x, y;
    };
    std::vector<std::string> order;
    std::map<std::string, std::vector<Step>> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto& id = row[id_col];
        auto [it, inserted] = by_id.try_emplace(id);
        if (inserted) order.push_back(id);
        it->second.push_back({parse_number(row[t_col], where(path, r, t_col)),
                              parse_number(row[x_col], where(path, r, x_col)),
                              parse_number(row[y_col], where(path, r, y_col))});
    }
    if (order.empty()) throw DataError(path.string() + ": no trajectories");

    Dataset out;
    out.column_names = {"trajectory"};
    for (const auto& id : order) {
        auto steps = by_id[id];
        std::stable_sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.t < b.t; });
        for (std::size_t i = 1; i < steps.size(); ++i) {
            if (steps[i].t == steps[i - 1].t) {
                throw DataError(path.string() + ": trajectory '" + id + "' repeats a time step");
            }
        }
        if (steps.size() < 2) {
            throw DataError(path.string() + ": trajectory '" + id + "' has fewer than 2 positions");
        }
        std::vector<double> features;
        for (const auto& s : steps) {
            features.push_back(s.x);
            features.push_back(s.y);
        }
        out.samples.emplace_back(std::move(features));
    }
    return out;
}

std::string csv_escape(std::string_view field, char delimiter) {
    const bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\r', '\n'}) !=
                              std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_row(const std::vector<std::string>& fields, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(delimiter);
        out += csv_escape(fields[i], delimiter);
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_digest(std::string_view config) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(fnv1a64(config)));
    return "fnv1a64:" + std::string(buf.data(), 16);
}

std::string csv_metadata_line(const OutputMetadata& meta) {
    std::string out = "# " + std::string(kToolName) + " " + std::string(kToolVersion);
    if (!meta.command.empty()) out += " command=" + meta.command;
    if (meta.seed) out += " seed=" + std::to_string(*meta.seed);
    out += " config=" + config_digest(meta.config) + "\n";
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                                 ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string front_dump_csv(const DyadSet& dyads, const FrontAssignment& fronts,
                           const OutputMetadata& meta) {
    if (fronts.point_count() != dyads.size()) {
        throw UsageError("front dump: assignment does not match the dyad set");
    }
    std::string out = csv_metadata_line(meta);
    std::vector<std::string> header{"dyad_index", "i", "j"};
    for (std::size_t c = 0; c < dyads.criteria(); ++c) header.push_back("c" + std::to_string(c + 1));
    header.emplace_back("front");
    out += csv_row(header);
    for (std::size_t d = 0; d < dyads.size(); ++d) {
        const auto [i, j] = dyads.pair(d);
        std::vector<std::string> row{std::to_string(d), std::to_string(i), std::to_string(j)};
        for (double v : dyads.values(d)) row.push_back(format_double(v));
        row.push_back(std::to_string(fronts.depth_of[d]));
        out += csv_row(row);
    }
    return out;
}

}  // namespace pda
