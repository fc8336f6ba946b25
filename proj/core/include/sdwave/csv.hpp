#pragma once

// Deterministic CSV output: fixed column order, round-trip number formatting
// and a leading "# ..." comment line carrying provenance.

#include <filesystem>
#include <string>
#include <vector>

namespace sdwave {

/// Shortest text that reads back to the same double ({:.17g}); inf/nan spelled out.
std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  CsvTable& row();
  CsvTable& add(double x);
  CsvTable& add(long long x);
  CsvTable& add(int x) { return add(static_cast<long long>(x)); }
  CsvTable& add(bool x);
  CsvTable& add(const std::string& s);

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] std::size_t rows() const noexcept { return cells_.size(); }
  [[nodiscard]] std::string to_string(const std::string& comment = {}) const;

  /// Throws std::runtime_error when the file cannot be written or a row is
  /// incomplete.
  void write(const std::filesystem::path& path, const std::string& comment = {}) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> cells_;
};

}  // namespace sdwave
