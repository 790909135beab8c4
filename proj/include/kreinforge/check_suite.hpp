#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kreinforge/types.hpp"

namespace kreinforge {

struct CheckRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckSuiteOptions {
  std::uint64_t seed = 20250809;
  int instances = 20;
  int dim = 8;
  int target_dim = 3;
  double tolerance_scale = 1.0;  // multiplies every tolerance
  bool inject_defect = false;    // negative control: corrupt one instance
  int jobs = 1;
};

// Runs the identity battery (resolvent laws, adjoint symmetries, the
// abstract Green identity, the regular/singular equivalence, the two-stage
// factorization and block identities, reference-point invariance) on seeded
// random instances.  Residuals are maxima over the instances.
std::vector<CheckRow> run_check_suite(const CheckSuiteOptions& options);

bool all_pass(const std::vector<CheckRow>& rows);
void write_check_csv(std::ostream& out, const std::vector<CheckRow>& rows);

}  // namespace kreinforge
