#include "kreinforge/spectral_operator.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "kreinforge/linalg.hpp"

namespace kreinforge {

namespace {
constexpr double kUnitarityTol = 1e-12;
constexpr double kSpectrumHitTol = 1e-14;
constexpr double kOriginGap = 1e-6;
}  // namespace

SpectralOperator::SpectralOperator(RealVector eigenvalues, Matrix eigenbasis)
    : eigenvalues_(std::move(eigenvalues)), eigenbasis_(std::move(eigenbasis)) {
  const int n = static_cast<int>(eigenvalues_.size());
  if (n <= 0) throw dimension_mismatch("SpectralOperator: dimension must be positive");
  if (eigenbasis_.rows() != n || eigenbasis_.cols() != n)
    throw dimension_mismatch("SpectralOperator: eigenbasis shape mismatch");
  diagonal_basis_ = eigenbasis_.isIdentity(0.0);
  if (!diagonal_basis_) {
    // Frobenius norm dominates the spectral norm, so this certifies the
    // 1e-12 unitarity contract without a large SVD.
    const double unitarity =
        (eigenbasis_.adjoint() * eigenbasis_ - Matrix::Identity(n, n)).norm();
    if (unitarity > kUnitarityTol)
      throw dimension_mismatch(
          "SpectralOperator: eigenbasis not unitary, defect " +
          std::to_string(unitarity));
  }
}

SpectralOperator SpectralOperator::from_hermitian(const Matrix& h) {
  if (h.rows() != h.cols())
    throw dimension_mismatch("SpectralOperator::from_hermitian: square matrix required");
  if (hermiticity_defect(h) > 1e-10)
    throw dimension_mismatch("SpectralOperator::from_hermitian: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return SpectralOperator(es.eigenvalues(), es.eigenvectors());
}

SpectralOperator SpectralOperator::diagonal(RealVector eigenvalues) {
  const int n = static_cast<int>(eigenvalues.size());
  return SpectralOperator(std::move(eigenvalues), Matrix::Identity(n, n));
}

Matrix SpectralOperator::matrix() const {
  return apply([](double lambda) { return Complex(lambda, 0.0); });
}

Matrix SpectralOperator::apply(const std::function<Complex(double)>& f) const {
  Vector d(dim());
  for (int i = 0; i < dim(); ++i) d(i) = f(eigenvalues_(i));
  if (diagonal_basis_) return Matrix(d.asDiagonal());
  return eigenbasis_ * d.asDiagonal() * eigenbasis_.adjoint();
}

Matrix SpectralOperator::resolvent(Complex z) const {
  if (distance_to_spectrum(z) < kSpectrumHitTol)
    throw spectrum_hit("resolvent: z within 1e-14 of the spectrum");
  return apply([z](double lambda) { return 1.0 / (z - lambda); });
}

Matrix SpectralOperator::weight(double s) const {
  return apply([s](double lambda) {
    return Complex(std::pow(lambda * lambda + 1.0, 0.5 * s), 0.0);
  });
}

double SpectralOperator::distance_to_spectrum(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim(); ++i) d = std::min(d, std::abs(z - eigenvalues_(i)));
  return d;
}

double SpectralOperator::spectral_radius() const {
  return eigenvalues_.cwiseAbs().maxCoeff();
}

double SpectralOperator::min_eigenvalue() const { return eigenvalues_.minCoeff(); }

double SpectralOperator::default_lambda0() const {
  if (distance_to_spectrum(Complex(0.0, 0.0)) > kOriginGap) return 0.0;
  return min_eigenvalue() - 1.0;
}

double scale_norm(const Matrix& op, const SpectralOperator& source, double s,
                  double t, const SpectralOperator* target) {
  if (op.cols() != source.dim())
    throw dimension_mismatch("scale_norm: operator does not act on the source space");
  Matrix weighted = op * source.weight(-s);
  if (t != 0.0) {
    if (target == nullptr)
      throw dimension_mismatch("scale_norm: t != 0 requires a target operator");
    if (op.rows() != target->dim())
      throw dimension_mismatch("scale_norm: operator range does not match the target space");
    weighted = target->weight(t) * weighted;
  }
  return operator_norm(weighted);
}

double first_resolvent_check(const SpectralOperator& h, Complex z, Complex w) {
  const Matrix rz = h.resolvent(z);
  const Matrix rw = h.resolvent(w);
  return operator_norm(rz - rw - (w - z) * rz * rw);
}

}  // namespace kreinforge
