#pragma once

#include <functional>

#include "kreinforge/types.hpp"

namespace kreinforge {

// Self-adjoint operator H held in spectral form: real eigenvalues `lambda`
// and a unitary eigenbasis U with H = U diag(lambda) U^dagger.  Everything
// downstream (resolvents R_z = (-H + z)^{-1}, fractional weights
// W_s = (H^2 + 1)^{s/2}, the scale norms) is functional calculus on this
// decomposition, so the class validates unitarity and Hermiticity once at
// construction and is immutable afterwards.
class SpectralOperator {
 public:
  SpectralOperator(RealVector eigenvalues, Matrix eigenbasis);

  static SpectralOperator from_hermitian(const Matrix& h);
  static SpectralOperator diagonal(RealVector eigenvalues);

  int dim() const { return static_cast<int>(eigenvalues_.size()); }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenbasis() const { return eigenbasis_; }

  Matrix matrix() const;                               // U diag(lambda) U*
  Matrix apply(const std::function<Complex(double)>& f) const;

  // (-H + z)^{-1}; throws spectrum_hit when z is within 1e-14 of an
  // eigenvalue.
  Matrix resolvent(Complex z) const;

  // Scale weight W_s = (H^2 + 1)^{s/2}; W_s W_{-s} = 1.
  Matrix weight(double s) const;

  double distance_to_spectrum(Complex z) const;
  double spectral_radius() const;
  double min_eigenvalue() const;

  // Reference point lambda_0: 0 when the spectrum keeps a gap of 1e-6
  // around the origin, otherwise min(spectrum) - 1.
  double default_lambda0() const;

 private:
  RealVector eigenvalues_;
  Matrix eigenbasis_;
  bool diagonal_basis_ = false;
};

// Operator norm of W_t * op * W_s^{-1}, i.e. the norm of `op` as a map from
// the source scale space with index s into the target scale space with index
// t.  A target operator is required whenever t != 0; with t = 0 the target
// carries the plain norm (the auxiliary-space case).
double scale_norm(const Matrix& op, const SpectralOperator& source, double s,
                  double t = 0.0, const SpectralOperator* target = nullptr);

// ||R_z - R_w - (w - z) R_z R_w||: residual of the first resolvent identity.
double first_resolvent_check(const SpectralOperator& h, Complex z, Complex w);

}  // namespace kreinforge
