#include "kreinforge/charge_map.hpp"

namespace kreinforge {

ChargeMap::ChargeMap(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() < 1 || matrix_.cols() < 1)
    throw dimension_mismatch("ChargeMap: empty matrix");
  if (!matrix_.allFinite())
    throw dimension_mismatch("ChargeMap: entries must be finite");
}

ChargeMap ChargeMap::zero(int target_dim, int dim) {
  return ChargeMap(Matrix::Zero(target_dim, dim));
}

double ChargeMap::norm_from_scale(const SpectralOperator& h, double s) const {
  return scale_norm(matrix_, h, s);
}

}  // namespace kreinforge
