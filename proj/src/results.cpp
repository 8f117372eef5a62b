#include "hsps/results.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hsps/errors.hpp"

namespace hsps {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return std::isfinite(v) ? shortest(v) : std::string{}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string q = "\"";
      for (char ch : v) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

ordered_json json_cell(const Cell& c) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(double v) const { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

Cell cell_from_json(const ordered_json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw DomainError("unsupported JSON cell");
}

Cell cell_from_text(const std::string& text) {
  if (text.empty()) return std::monostate{};
  const char* end = text.data() + text.size();
  if (text.find_first_of(".eE") == std::string::npos || text == "inf") {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(text.data(), end, i);
    if (ec == std::errc{} && p == end) return i;
  }
  double d = 0.0;
  auto [p, ec] = std::from_chars(text.data(), end, d);
  if (ec == std::errc{} && p == end) return d;
  return text;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> as_optional(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::nullopt;
}

double as_double(const Cell& c) {
  const auto v = as_optional(c);
  if (!v) throw DomainError("expected a numeric cell");
  return *v;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{std::monostate{}}; }

}  // namespace

OutputFormat parse_output_format(const std::string& text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  throw ConfigError("format", "output format must be json or csv, got '" + text + "'");
}

std::string render_results(const ResultTable& table, const RunMeta& meta, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
      out += "\n";
    }
    return out;
  }
  ordered_json j;
  j["meta"] = {{"command", meta.command},
               {"config_hash", meta.config_hash},
               {"seed", meta.seed},
               {"trials", meta.trials},
               {"version", meta.version}};
  if (!table.summary.empty()) {
    ordered_json s = ordered_json::object();
    for (const auto& [k, v] : table.summary) s[k] = json_cell(v);
    j["summary"] = s;
  }
  j["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) r[table.columns[i]] = json_cell(row.at(i));
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

void emit_results(const ResultTable& table, const RunMeta& meta, OutputFormat format, const std::string& path) {
  if (table.rows.empty()) throw DomainError("refusing to emit an empty result table");
  const std::string text = render_results(table, meta, format);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

ResultTable parse_csv_table(const std::string& text) {
  ResultTable t;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (header) {
      t.columns = cells;
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw DomainError("CSV row width differs from header");
    std::vector<Cell> row;
    for (const auto& c : cells) row.push_back(cell_from_text(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ResultTable parse_json_table(const std::string& text) {
  const auto j = ordered_json::parse(text);
  ResultTable t;
  for (const auto& r : j.at("rows")) {
    if (t.columns.empty()) {
      for (const auto& item : r.items()) t.columns.push_back(item.key());
    }
    std::vector<Cell> row;
    for (const auto& col : t.columns) row.push_back(cell_from_json(r.at(col)));
    t.rows.push_back(std::move(row));
  }
  if (j.contains("summary")) {
    for (const auto& item : j["summary"].items()) t.summary.emplace_back(item.key(), cell_from_json(item.value()));
  }
  return t;
}

ResultTable sweep_table(const std::vector<SweepRow>& rows) {
  ResultTable t;
  t.columns = {"axis", "value", "p_h", "p_1", "p_2", "g2_true", "g2_est", "se_p1", "se_g2"};
  for (const auto& r : rows) {
    t.rows.push_back({r.axis, r.value, r.p_h, r.p_1, r.p_2, opt_cell(r.g2_true), opt_cell(r.g2_est), r.se_p1,
                      r.se_g2});
  }
  return t;
}

std::vector<SweepRow> sweep_rows_from_table(const ResultTable& t) {
  const std::vector<std::string> expected = {"axis", "value", "p_h", "p_1", "p_2", "g2_true", "g2_est", "se_p1", "se_g2"};
  if (t.columns != expected) throw DomainError("not a sweep table");
  std::vector<SweepRow> rows;
  for (const auto& c : t.rows) {
    SweepRow r;
    r.axis = std::get<std::string>(c[0]);
    r.value = as_double(c[1]);
    r.p_h = as_double(c[2]);
    r.p_1 = as_double(c[3]);
    r.p_2 = as_double(c[4]);
    r.g2_true = as_optional(c[5]);
    r.g2_est = as_optional(c[6]);
    r.se_p1 = as_double(c[7]);
    r.se_g2 = as_double(c[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

SweepRow make_row(const std::string& axis, double value, const SimResult& r) {
  SweepRow row;
  row.axis = axis;
  row.value = value;
  row.p_h = r.p_h;
  row.p_1 = r.p_1;
  row.p_2 = r.p_2;
  row.g2_true = r.g2_true;
  row.g2_est = r.g2_est;
  row.se_p1 = r.se_p_1;
  row.se_g2 = r.se_g2_est;
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values,
                                std::uint64_t seed, std::uint64_t trials, Engine engine) {
  if (!is_numeric_key(axis)) throw ConfigError(axis, "sweep axis '" + axis + "' is not a numeric key");
  if (values.empty()) throw ConfigError(axis, "sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double v : values) {
    RunConfig cfg = base;
    set_config_value(cfg, axis, shortest(v));
    cfg.validate();
    const SimResult r =
        engine == Engine::Analytic ? analyze(cfg.experiment) : simulate_trials(cfg.experiment, trials, seed);
    rows.push_back(make_row(axis, v, r));
  }
  return rows;
}

}  // namespace hsps
