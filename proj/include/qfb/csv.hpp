#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qfb {

/// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

using CsvCell = std::variant<double, std::int64_t, std::string>;

/// Comma-separated table with a header row, '\n' line endings and no quoting
/// (cells never contain separators).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Throws Error{structural} if the arity differs from the header.
  void add_row(std::vector<CsvCell> cells);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Parsed CSV: header plus string cells, for readers and tests.
struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws Error{structural} if absent.
  std::size_t column(std::string_view name) const;
};

CsvData parse_csv(std::string_view text);
CsvData read_csv(const std::filesystem::path& path);

}  // namespace qfb
