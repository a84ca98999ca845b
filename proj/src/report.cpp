#include "lgas/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "lgas/errors.hpp"

namespace lgas {

std::size_t Report::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw ContractError("report has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

void Report::add(std::initializer_list<std::pair<std::string, Cell>> cells) {
  std::vector<Cell> row(columns_.size());
  for (const auto& [name, value] : cells) row[column(name)] = value;
  rows_.push_back(std::move(row));
}

void Report::set(std::size_t row, const std::string& name, Cell value) {
  rows_.at(row)[column(name)] = std::move(value);
}

const Cell& Report::at(std::size_t row, const std::string& name) const { return rows_.at(row)[column(name)]; }

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Cell& cell) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(double d) const { return std::isnan(d) ? "" : format_double(d); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
  } visitor;
  return std::visit(visitor, cell);
}

nlohmann::ordered_json json_value(const Cell& cell) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
    nlohmann::ordered_json operator()(std::uint64_t u) const { return u; }
    nlohmann::ordered_json operator()(double d) const {
      if (std::isnan(d)) return nullptr;
      if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
      return d;
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visitor;
  return std::visit(visitor, cell);
}

}  // namespace

std::string to_csv(const Report& report) {
  std::string out;
  const auto line = [&out](const auto& fields, auto&& render) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out += ',';
      out += render(fields[i]);
    }
    out += '\n';
  };
  line(report.columns(), [](const std::string& s) { return csv_field(s); });
  for (const auto& row : report.rows()) line(row, csv_field);
  return out;
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["columns"] = report.columns();
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows()) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[report.columns()[i]] = json_value(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

void emit_results(const Report& report, Format format, const std::string& path) {
  const std::string text = format == Format::csv ? to_csv(report) : to_json(report);
  if (path.empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw std::runtime_error("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace lgas
