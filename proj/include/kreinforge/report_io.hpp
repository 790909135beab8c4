#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kreinforge {

// CSV emission with a stable schema: fixed header, '\n' endings, and numbers
// printed as full-precision scientific (17 significant digits) so regression
// diffs stay meaningful.  Identical inputs produce byte-identical output.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  void begin_row();
  void field(double value);
  void field(const std::string& value);
  void end_row();

  static std::string format(double value);

 private:
  std::ostream& out_;
  bool first_in_row_ = true;
};

}  // namespace kreinforge
