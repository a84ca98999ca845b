#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lgas/config.hpp"

namespace lgas {

/// One table cell. monostate is an absent value (empty in CSV, null in JSON);
/// a NaN double is written the same way.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

/// A table with a fixed column list.
class Report {
 public:
  Report() = default;
  explicit Report(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// Appends a row; columns not named stay empty. Throws ContractError on an
  /// unknown column.
  void add(std::initializer_list<std::pair<std::string, Cell>> cells);
  void set(std::size_t row, const std::string& column, Cell value);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const Cell& at(std::size_t row, const std::string& column) const;

 private:
  std::size_t column(const std::string& name) const;

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// CSV with a header line; doubles as %.17g.
std::string to_csv(const Report& report);
/// {"columns": [...], "rows": [{column: value, ...}, ...]}, two-space indent.
std::string to_json(const Report& report);

/// Writes the report to `path`, or to standard output when `path` is empty.
/// Throws std::runtime_error on I/O failure.
void emit_results(const Report& report, Format format, const std::string& path);

}  // namespace lgas
