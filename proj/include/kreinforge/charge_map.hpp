#pragma once

#include "kreinforge/spectral_operator.hpp"
#include "kreinforge/types.hpp"

namespace kreinforge {

// Bounded charge map Sigma from the form domain of H into an auxiliary space
// of dimension target_dim, stored as a target_dim x dim matrix in the
// coordinates of H's ambient space.  The adjoint into the dual scale space is
// the plain conjugate transpose in these coordinates; only the norms carry
// the scale weights.
class ChargeMap {
 public:
  explicit ChargeMap(Matrix m);

  int target_dim() const { return static_cast<int>(matrix_.rows()); }
  int dim() const { return static_cast<int>(matrix_.cols()); }
  const Matrix& matrix() const { return matrix_; }
  Matrix adjoint() const { return matrix_.adjoint(); }

  static ChargeMap zero(int target_dim, int dim);

  // ||Sigma|| as a map from the scale space with index s into the target.
  double norm_from_scale(const SpectralOperator& h, double s) const;

 private:
  Matrix matrix_;
};

}  // namespace kreinforge
