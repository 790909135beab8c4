#include "kreinforge/linalg.hpp"

#include <limits>

namespace kreinforge {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

Matrix dense_resolvent(const Matrix& k, Complex z) {
  if (k.rows() != k.cols()) throw dimension_mismatch("dense_resolvent: square matrix required");
  Matrix shifted = -k;
  shifted.diagonal().array() += z;
  return shifted.partialPivLu().solve(Matrix::Identity(k.rows(), k.cols()));
}

double hermiticity_defect(const Matrix& m) {
  return operator_norm(m - m.adjoint());
}

Vector least_squares(const Matrix& a, const Vector& b, double* cond_out) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (cond_out) {
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    *cond_out = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  }
  return svd.solve(b);
}

}  // namespace kreinforge
