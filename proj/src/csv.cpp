#include "qfb/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qfb/error.hpp"

namespace qfb {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<CsvCell> cells) {
  if (cells.size() != columns_.size())
    throw Error(ErrorCategory::structural, "cli", "csv",
                "row has " + std::to_string(cells.size()) + " cells, header has " +
                    std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    if (k) out += ',';
    out += columns_[k];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, double>) out += format_number(c);
            else if constexpr (std::is_same_v<T, std::int64_t>) out += std::to_string(c);
            else out += c;
          },
          row[k]);
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw Error(ErrorCategory::config, "cli", "output_dir",
                "cannot open " + path.string() + " for writing");
  const std::string s = str();
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::size_t CsvData::column(std::string_view name) const {
  for (std::size_t k = 0; k < columns.size(); ++k)
    if (columns[k] == name) return k;
  throw Error(ErrorCategory::structural, "cli", "csv",
              "missing column '" + std::string(name) + "'");
}

CsvData parse_csv(std::string_view text) {
  CsvData out;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      out.columns = split(line);
      header = false;
      continue;
    }
    auto cells = split(line);
    if (cells.size() != out.columns.size())
      throw Error(ErrorCategory::structural, "cli", "csv",
                  "row arity " + std::to_string(cells.size()) + " differs from header");
    out.rows.push_back(std::move(cells));
  }
  if (header) throw Error(ErrorCategory::structural, "cli", "csv", "empty CSV");
  return out;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw Error(ErrorCategory::not_found, "cli", "csv", "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace qfb
