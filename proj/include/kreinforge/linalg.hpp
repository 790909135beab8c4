#pragma once

#include "kreinforge/types.hpp"

namespace kreinforge {

// Spectral norm (largest singular value).  All "norm-resolvent" distances in
// the library use this norm.
double operator_norm(const Matrix& m);

// Largest over smallest singular value; +inf when numerically rank deficient.
double condition_number(const Matrix& m);

// LU solve of m * x = rhs guarded by a condition-number threshold.  The
// exception to throw on a bad pivot varies by call site, so the caller names
// it through the template parameter.
template <typename Error>
Matrix solve_checked(const Matrix& m, const Matrix& rhs, double cond_limit,
                     const std::string& context) {
  if (m.rows() != m.cols() || m.rows() != rhs.rows())
    throw dimension_mismatch(context + ": incompatible shapes");
  const double cond = condition_number(m);
  if (!(cond < cond_limit))
    throw Error(context + ": condition number " + std::to_string(cond) +
                " exceeds limit");
  return m.partialPivLu().solve(rhs);
}

template <typename Error>
Matrix inverse_checked(const Matrix& m, double cond_limit,
                       const std::string& context) {
  return solve_checked<Error>(m, Matrix::Identity(m.rows(), m.cols()),
                              cond_limit, context);
}

// Resolvent (-K + z)^{-1} of a dense Hermitian matrix, by LU.
Matrix dense_resolvent(const Matrix& k, Complex z);

// Hermiticity defect ||m - m^dagger|| in the spectral norm.
double hermiticity_defect(const Matrix& m);

// Least squares x minimizing ||a x - b||, with the condition number of `a`
// reported through `cond_out` so callers can certify uniqueness.
Vector least_squares(const Matrix& a, const Vector& b, double* cond_out);

}  // namespace kreinforge
