#include "ocat/csv.hpp"

#include <fmt/format.h>

#include <cmath>

#include "ocat/errors.hpp"

namespace ocat {

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size())
    throw std::logic_error("csv row width " + std::to_string(row.size()) + " != header width " +
                           std::to_string(header_.size()));
  rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        if (!std::isfinite(*d))
          throw NumericalError("non-finite value in CSV column '" + header_[i] + "'");
        out += format_double(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
        out += std::to_string(*n);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace ocat
