#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ocat {

// In-memory CSV table. Doubles are written with 17 significant digits; a
// non-finite double raises NumericalError when the table is rendered.
class CsvTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  // Column headers carry their unit, e.g. "energy[E]".
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<Cell> row);
  std::string render() const;

  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double v);

}  // namespace ocat
