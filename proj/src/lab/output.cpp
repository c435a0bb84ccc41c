#include <cmath>
#include <cstdio>
#include <ostream>

#include "harvest/lab.hpp"
#include "json.hpp"

namespace harvest::lab {

namespace {

using nlohmann::ordered_json;

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

// nlohmann would re-serialize doubles in shortest round-trip form; numbers are
// written through format_double so CSV and JSON agree digit for digit.
std::string json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_double(*d) : "null";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return ordered_json(std::get<std::string>(c)).dump();
}

std::string single_line(const std::string& s) {
  std::string out = s;
  for (char& ch : out)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return out;
}

}  // namespace

const char* version() { return HARVEST_LAB_VERSION; }

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw UsageError("unknown format \"" + std::string(name) + "\" (expected csv or json)");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_table(std::ostream& out, const Table& table, Format format, const RunInfo& info) {
  if (format == Format::Csv) {
    out << "# command: " << single_line(info.command_line) << '\n';
    out << "# seed: " << info.seed << '\n';
    out << "# version: " << version() << '\n';
    for (const auto& [key, value] : table.summary) out << "# " << key << ": " << csv_cell(value) << '\n';
    for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << csv_cell(row[k]);
      out << '\n';
    }
    return;
  }
  const auto str = [](const std::string& v) { return ordered_json(v).dump(); };
  out << "{\n \"metadata\": {\"command\": " << str(info.command_line) << ", \"seed\": " << info.seed
      << ", \"version\": " << str(version()) << "},\n \"summary\": {";
  for (std::size_t k = 0; k < table.summary.size(); ++k) {
    out << (k ? ", " : "") << str(table.summary[k].first) << ": " << json_cell(table.summary[k].second);
  }
  out << "},\n \"columns\": [";
  for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? ", " : "") << str(table.columns[k]);
  out << "],\n \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n  [" : "\n  [");
    for (std::size_t k = 0; k < table.rows[r].size(); ++k) out << (k ? ", " : "") << json_cell(table.rows[r][k]);
    out << "]";
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n ]\n}\n");
}

}  // namespace harvest::lab
