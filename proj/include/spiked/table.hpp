#pragma once

// Tabular output shared by the command-line tool: CSV and JSON writers.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace spiked {

enum class OutputFormat { csv, json };

struct OutputSpec {
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> path;  // stdout when absent
  int precision = 9;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("Table::add_row: column count mismatch");
    rows.push_back(std::move(row));
  }
};

inline Cell optional_cell(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{std::nan("")};
}

/// %.<precision>g, with NaN / inf / -inf spelled exactly so.
inline std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

inline std::string format_cell(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, precision);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string to_csv(const Table& t, int precision) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << detail::csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_escape(format_cell(row[i], precision));
    os << '\n';
  }
  return os.str();
}

/// One JSON document: {"schema_version": "1", "command", "meta", "columns", "rows"}.
/// Numbers are rounded to the printed precision; non-finite values become the
/// strings "NaN", "inf" and "-inf".
inline std::string to_json(const Table& t, int precision) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["command"] = t.command;
  doc["meta"] = t.meta;
  doc["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d))
          obj[t.columns[i]] = std::strtod(format_double(*d, precision).c_str(), nullptr);
        else
          obj[t.columns[i]] = format_double(*d, precision);
      } else if (const auto* n = std::get_if<long long>(&c)) {
        obj[t.columns[i]] = *n;
      } else {
        obj[t.columns[i]] = std::get<std::string>(c);
      }
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

inline std::string render(const Table& t, const OutputSpec& spec) {
  return spec.format == OutputFormat::csv ? to_csv(t, spec.precision) : to_json(t, spec.precision);
}

inline void write_output(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + *path);
  out << text;
}

}  // namespace spiked
