#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kreinforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Numerical policy shared across the library.  Structural identities are
// checked against `identity_tol` for operators of spectral radius <= 10;
// inverses are accepted while the condition number stays below `cond_limit`.
struct Tolerances {
  double identity_tol = 1e-11;
  double cond_limit = 1e12;
  double spectrum_gap = 1e-14;
};

class kreinforge_error : public std::runtime_error {
 public:
  explicit kreinforge_error(const std::string& what) : std::runtime_error(what) {}
};

class spectrum_hit : public kreinforge_error {
 public:
  explicit spectrum_hit(const std::string& what) : kreinforge_error(what) {}
};

class dimension_mismatch : public kreinforge_error {
 public:
  explicit dimension_mismatch(const std::string& what) : kreinforge_error(what) {}
};

// z outside the admissible set: the extension pivot Theta + M_z (or its
// block analogue) is numerically singular.
class not_in_z : public kreinforge_error {
 public:
  explicit not_in_z(const std::string& what) : kreinforge_error(what) {}
};

class singular_pivot : public kreinforge_error {
 public:
  explicit singular_pivot(const std::string& what) : kreinforge_error(what) {}
};

class block_singular : public kreinforge_error {
 public:
  explicit block_singular(const std::string& what) : kreinforge_error(what) {}
};

class decomposition_ill_conditioned : public kreinforge_error {
 public:
  explicit decomposition_ill_conditioned(const std::string& what)
      : kreinforge_error(what) {}
};

class g_not_contractive : public kreinforge_error {
 public:
  explicit g_not_contractive(const std::string& what) : kreinforge_error(what) {}
};

class neumann_singular : public kreinforge_error {
 public:
  explicit neumann_singular(const std::string& what) : kreinforge_error(what) {}
};

class ladder_exhausted : public kreinforge_error {
 public:
  explicit ladder_exhausted(const std::string& what) : kreinforge_error(what) {}
};

class theta_singular : public kreinforge_error {
 public:
  explicit theta_singular(const std::string& what) : kreinforge_error(what) {}
};

class relative_bound_exceeded : public kreinforge_error {
 public:
  explicit relative_bound_exceeded(const std::string& what)
      : kreinforge_error(what) {}
};

class no_bound_state : public kreinforge_error {
 public:
  explicit no_bound_state(const std::string& what) : kreinforge_error(what) {}
};

class budget_exceeded : public kreinforge_error {
 public:
  explicit budget_exceeded(const std::string& what) : kreinforge_error(what) {}
};

class config_error : public kreinforge_error {
 public:
  explicit config_error(const std::string& what) : kreinforge_error(what) {}
};

}  // namespace kreinforge
