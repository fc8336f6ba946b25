#include "sdwave/csv.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <stdexcept>

namespace sdwave {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  return fmt::format("{:.17g}", x);
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("csv table needs at least one column");
}

CsvTable& CsvTable::row() {
  if (!cells_.empty() && cells_.back().size() != columns_.size()) {
    throw std::logic_error("previous csv row is incomplete");
  }
  cells_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(const std::string& s) {
  if (cells_.empty()) throw std::logic_error("csv add before row()");
  if (cells_.back().size() == columns_.size()) throw std::logic_error("csv row has too many cells");
  if (s.find_first_of(",\"\n") != std::string::npos) throw std::invalid_argument("csv cell needs quoting: " + s);
  cells_.back().push_back(s);
  return *this;
}

CsvTable& CsvTable::add(double x) { return add(format_number(x)); }
CsvTable& CsvTable::add(long long x) { return add(fmt::format("{}", x)); }
CsvTable& CsvTable::add(bool x) { return add(std::string(x ? "1" : "0")); }

std::string CsvTable::to_string(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += fmt::format("{}\n", fmt::join(columns_, ","));
  for (const auto& r : cells_) {
    if (r.size() != columns_.size()) throw std::logic_error("csv row is incomplete");
    out += fmt::format("{}\n", fmt::join(r, ","));
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path, const std::string& comment) const {
  const std::string text = to_string(comment);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace sdwave
