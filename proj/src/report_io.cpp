#include "kreinforge/report_io.hpp"

#include <cstdio>

namespace kreinforge {

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << names[i];
  }
  out_ << '\n';
}

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::field(double value) {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
  out_ << format(value);
}

void CsvWriter::field(const std::string& value) {
  if (!first_in_row_) out_ << ',';
  first_in_row_ = false;
  out_ << value;
}

void CsvWriter::end_row() { out_ << '\n'; }

std::string CsvWriter::format(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

}  // namespace kreinforge
