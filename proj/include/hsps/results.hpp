#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hsps/config.hpp"

namespace hsps {

/// A table cell; monostate is an undefined value (null in JSON, empty in CSV).
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Scalar results that do not fit the row schema (JSON only).
  std::vector<std::pair<std::string, Cell>> summary;
};

struct RunMeta {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string version;
};

enum class OutputFormat { Json, Csv };
OutputFormat parse_output_format(const std::string& text);

/// Serialized form of a table. JSON: {"meta": {...}, "rows": [...]}; CSV:
/// header line with the column names, then one line per row.
std::string render_results(const ResultTable& table, const RunMeta& meta, OutputFormat format);

/// Writes the rendered table to `path` ("-" is stdout). Throws DomainError on
/// an empty table (nothing is written) and IoError when the path is unwritable.
void emit_results(const ResultTable& table, const RunMeta& meta, OutputFormat format, const std::string& path);

/// Parse-back of emitted files.
ResultTable parse_csv_table(const std::string& text);
ResultTable parse_json_table(const std::string& text);

/// One row of a parameter sweep.
struct SweepRow {
  std::string axis;
  double value = 0.0;
  double p_h = 0.0;
  double p_1 = 0.0;
  double p_2 = 0.0;
  std::optional<double> g2_true;
  std::optional<double> g2_est;
  double se_p1 = 0.0;
  double se_g2 = 0.0;

  bool operator==(const SweepRow&) const = default;
};

inline constexpr const char* kSweepCsvHeader = "axis,value,p_h,p_1,p_2,g2_true,g2_est,se_p1,se_g2";

ResultTable sweep_table(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_rows_from_table(const ResultTable& table);

enum class Engine { MonteCarlo, Analytic };

/// One row per value in input order. Every row reuses `seed`, so rows differ
/// only through the swept parameter.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                                std::uint64_t seed, std::uint64_t trials, Engine engine);

SweepRow make_row(const std::string& axis, double value, const SimResult& r);

}  // namespace hsps
