#include "kreinforge/random.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace kreinforge {

double RandomEngine::uniform() {
  // 53-bit mantissa fill, independent of distribution implementations.
  return (gen_() >> 11) * 0x1.0p-53;
}

double RandomEngine::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Complex RandomEngine::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

Vector RandomEngine::complex_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_gaussian();
  return v;
}

Vector RandomEngine::unit_vector(int n) {
  Vector v = complex_vector(n);
  const double norm = v.norm();
  if (norm == 0.0) return unit_vector(n);
  return v / norm;
}

Matrix RandomEngine::complex_matrix(int rows, int cols) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
  return m;
}

Matrix RandomEngine::hermitian(int n, double spectral_radius) {
  Matrix x = complex_matrix(n, n);
  Matrix h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double r = es.eigenvalues().cwiseAbs().maxCoeff();
  if (r > 0.0) h *= spectral_radius / r;
  return h;
}

Matrix RandomEngine::hermitian_in_band(int n, double lo, double hi) {
  Matrix x = complex_matrix(n, n);
  Matrix h = 0.5 * (x + x.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double emin = es.eigenvalues().minCoeff();
  const double emax = es.eigenvalues().maxCoeff();
  const double span = emax - emin;
  RealVector mapped(n);
  for (int i = 0; i < n; ++i) {
    const double t = span > 0.0 ? (es.eigenvalues()(i) - emin) / span : 0.5;
    mapped(i) = lo + t * (hi - lo);
  }
  return es.eigenvectors() * mapped.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace kreinforge
