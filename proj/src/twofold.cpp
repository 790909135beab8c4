#include "kreinforge/twofold.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "kreinforge/linalg.hpp"

namespace kreinforge {

Matrix BlockOperator::assemble() const {
  const auto r0 = blocks[0][0].rows(), r1 = blocks[1][0].rows();
  const auto c0 = blocks[0][0].cols(), c1 = blocks[0][1].cols();
  if (blocks[0][1].rows() != r0 || blocks[1][1].rows() != r1 ||
      blocks[1][0].cols() != c0 || blocks[1][1].cols() != c1)
    throw dimension_mismatch("BlockOperator: inconsistent block shapes");
  Matrix out(r0 + r1, c0 + c1);
  out.topLeftCorner(r0, c0) = blocks[0][0];
  out.topRightCorner(r0, c1) = blocks[0][1];
  out.bottomLeftCorner(r1, c0) = blocks[1][0];
  out.bottomRightCorner(r1, c1) = blocks[1][1];
  return out;
}

BlockOperator BlockOperator::multiply(const BlockOperator& rhs) const {
  if (col_scale != rhs.row_scale)
    throw dimension_mismatch("BlockOperator: scale tags do not compose");
  BlockOperator out;
  out.row_scale = row_scale;
  out.col_scale = rhs.col_scale;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.blocks[i][j] = blocks[i][0] * rhs.blocks[0][j] +
                         blocks[i][1] * rhs.blocks[1][j];
  return out;
}

TwofoldSystem::TwofoldSystem(SpectralOperator h, ChargeMap a,
                             ExtensionParameter t, double s_index,
                             std::optional<double> lambda0,
                             std::optional<double> hat_lambda0, Tolerances tol)
    : family_(std::move(h), std::move(a), lambda0, tol),
      t_(std::move(t)),
      s_index_(s_index),
      hat_lambda0_(hat_lambda0) {
  if (family_.target_dim() != family_.dim())
    throw dimension_mismatch("TwofoldSystem: charge must map into the ambient space");
  if (t_.dim() != family_.dim())
    throw dimension_mismatch("TwofoldSystem: parameter dimension mismatch");
  if (!(s_index_ > 0.0 && s_index_ < 1.0))
    throw dimension_mismatch("TwofoldSystem: scale index must lie in (0,1)");
  a_scale_norm_ = family_.sigma().norm_from_scale(family_.op(), s_index_);
  if (t_.kind == ThetaKind::symmetric_only) {
    const double a_hat = relative_bound_estimate();
    if (!(a_hat < 1.0))
      throw relative_bound_exceeded(
          "TwofoldSystem: symmetric parameter has relative bound " +
          std::to_string(a_hat));
  }
}

Matrix TwofoldSystem::at_gz(Complex z) const {
  // A_T G_z = T - A (G - G_z) = T - M_z.
  return t_.theta - family_.weyl(z);
}

Matrix TwofoldSystem::first_stage_resolvent(Complex z) const {
  const Matrix inv = inverse_checked<not_in_z>(
      at_gz(z), family_.tolerances().cond_limit, "first stage pivot");
  return family_.op().resolvent(z) -
         family_.gz(z) * inv * family_.gz(std::conj(z)).adjoint();
}

Matrix TwofoldSystem::hat_g(Complex z) const {
  const Matrix inv = inverse_checked<not_in_z>(
      at_gz(z), family_.tolerances().cond_limit, "first stage pivot");
  return first_stage_resolvent(z) + family_.gz(z) * inv;
}

Matrix TwofoldSystem::sigma_hat_g(Complex z) const {
  const int n = dim();
  const Matrix inv = inverse_checked<not_in_z>(
      at_gz(z), family_.tolerances().cond_limit, "first stage pivot");
  const Matrix left = Matrix::Identity(n, n) - family_.gz(z);
  const Matrix right =
      Matrix::Identity(n, n) - family_.gz(std::conj(z)).adjoint();
  return family_.op().resolvent(z) - left * inv * right;
}

Matrix TwofoldSystem::astar_hat_g(Complex z) const {
  const int n = dim();
  const Matrix inv = inverse_checked<not_in_z>(
      at_gz(z), family_.tolerances().cond_limit, "first stage pivot");
  return inv * (Matrix::Identity(n, n) - family_.gz(std::conj(z)).adjoint());
}

double TwofoldSystem::hat_g_left_inverse_residual(Complex z) const {
  const int n = dim();
  const Matrix charges = astar_hat_g(z);
  const Matrix regular_parts = hat_g(z) - family_.g0() * charges;
  const Matrix applied =
      family_.sigma().matrix() * regular_parts + t_.theta * charges;
  return operator_norm(applied - Matrix::Identity(n, n));
}

double TwofoldSystem::hat_lambda0() const {
  {
    std::lock_guard<std::mutex> lock(lazy_mutex_);
    if (hat_lambda0_) return *hat_lambda0_;
  }
  const double l0 = lambda0();
  double resolved = l0;
  if (condition_number(at_gz(Complex(l0, 0.0))) < family_.tolerances().cond_limit) {
    resolved = l0;  // invertible T admits the stage-one reference point
  } else {
    // Scan the real axis below both spectra by doubling steps.
    const Matrix ht = Complex(0.0, 1.0 + family_.op().spectral_radius()) *
                          Matrix::Identity(dim(), dim()) -
                      inverse_checked<not_in_z>(
                          first_stage_resolvent(Complex(
                              0.0, 1.0 + family_.op().spectral_radius())),
                          family_.tolerances().cond_limit, "stage-one inverse");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ht + ht.adjoint()));
    const double base =
        std::min(family_.op().min_eigenvalue(), es.eigenvalues().minCoeff());
    int k = 0;
    for (; k < 60; ++k) {
      const double candidate = base - std::pow(2.0, k);
      if (condition_number(at_gz(Complex(candidate, 0.0))) <
          family_.tolerances().cond_limit) {
        resolved = candidate;
        break;
      }
    }
    if (k == 60)
      throw not_in_z("hat_lambda0: no admissible real reference point found");
  }
  std::lock_guard<std::mutex> lock(lazy_mutex_);
  if (!hat_lambda0_) hat_lambda0_ = resolved;
  return *hat_lambda0_;
}

Matrix TwofoldSystem::theta_hat() const {
  return -sigma_hat_g(Complex(hat_lambda0(), 0.0));
}

Matrix TwofoldSystem::block_pivot(Complex z) const {
  const int n = dim();
  const Matrix id = Matrix::Identity(n, n);
  BlockOperator b;
  b.blocks[0][0] = at_gz(z);
  b.blocks[0][1] = family_.gz(std::conj(z)).adjoint() - id;
  b.blocks[1][0] = family_.gz(z) - id;
  b.blocks[1][1] = family_.op().resolvent(z);
  b.row_scale = {0.0, 1.0};
  b.col_scale = {0.0, -1.0};
  return b.assemble();
}

Matrix TwofoldSystem::twofold_resolvent(Complex z, SchurMode mode) const {
  const int n = dim();
  const Matrix rz = family_.op().resolvent(z);
  const Matrix g = family_.gz(z);
  const Matrix g_adj = family_.gz(std::conj(z)).adjoint();
  Matrix left(n, 2 * n), right(2 * n, n);
  left.leftCols(n) = g;
  left.rightCols(n) = rz;
  right.topRows(n) = g_adj;
  right.bottomRows(n) = rz;

  switch (mode) {
    case SchurMode::dense: {
      const Matrix solved = solve_checked<block_singular>(
          block_pivot(z), right, family_.tolerances().cond_limit,
          "twofold block pivot");
      return rz - left * solved;
    }
    case SchurMode::first: {
      // Pivot on the (2,2) entry R_z, whose inverse is -H + z.
      const Matrix id = Matrix::Identity(n, n);
      const Matrix rz_inv = -family_.op().matrix() + z * id;
      const Matrix b12 = g_adj - id;
      const Matrix b21 = g - id;
      const Matrix s = at_gz(z) - b12 * rz_inv * b21;
      const Matrix s_inv = inverse_checked<block_singular>(
          s, family_.tolerances().cond_limit, "first Schur complement");
      // Rows of B^{-1} [G_zbar^*; R_z] through the Schur factorization.
      const Matrix top = s_inv * (g_adj - b12 * rz_inv * rz);
      const Matrix bottom = rz_inv * (rz - b21 * top);
      return rz - g * top - rz * bottom;
    }
    case SchurMode::second: {
      const Matrix id = Matrix::Identity(n, n);
      const Matrix a_inv = inverse_checked<block_singular>(
          at_gz(z), family_.tolerances().cond_limit, "stage-one pivot");
      const Matrix b12 = g_adj - id;
      const Matrix b21 = g - id;
      const Matrix s = rz - b21 * a_inv * b12;
      const Matrix s_inv = inverse_checked<block_singular>(
          s, family_.tolerances().cond_limit, "second Schur complement");
      const Matrix bottom = s_inv * (rz - b21 * a_inv * g_adj);
      const Matrix top = a_inv * (g_adj - b12 * bottom);
      return rz - g * top - rz * bottom;
    }
  }
  throw kreinforge_error("twofold_resolvent: unknown mode");
}

Matrix TwofoldSystem::twofold_resolvent_via_stages(Complex z) const {
  const Matrix pivot = sigma_hat_g(z);
  const Matrix inv = inverse_checked<not_in_z>(
      pivot, family_.tolerances().cond_limit, "stage-two pivot");
  return first_stage_resolvent(z) -
         hat_g(z) * inv * hat_g(std::conj(z)).adjoint();
}

Matrix TwofoldSystem::one_minus_g() const {
  return Matrix::Identity(dim(), dim()) - family_.g0();
}

Matrix TwofoldSystem::one_minus_g_adj() const {
  return Matrix::Identity(dim(), dim()) - family_.g0().adjoint();
}

Matrix TwofoldSystem::hat_h0_factorized() const {
  const double gn = operator_norm(family_.g0());
  if (gn >= 1.0)
    throw g_not_contractive(
        "hat_h0_factorized: ||G|| = " + std::to_string(gn) +
        " >= 1 at lambda0 = " + std::to_string(lambda0()) +
        "; move lambda0 further below the spectrum");
  const Matrix mh = -family_.op().matrix() +
                    lambda0() * Matrix::Identity(dim(), dim());
  return one_minus_g_adj() * mh * one_minus_g();
}

Matrix TwofoldSystem::hat_h0() const {
  return lambda0() * Matrix::Identity(dim(), dim()) - hat_h0_factorized();
}

Matrix TwofoldSystem::hat_h0_resolvent(Complex z) const {
  return dense_resolvent(hat_h0(), z);
}

Matrix TwofoldSystem::res_t_composition(Complex z) const {
  const Matrix r0z = hat_h0_resolvent(z);
  const Matrix pivot = Matrix::Identity(dim(), dim()) - t_.theta * r0z;
  const Matrix inv = inverse_checked<neumann_singular>(
      pivot, family_.tolerances().cond_limit, "resolvent composition pivot");
  return r0z + r0z * inv * t_.theta * r0z;
}

BlockOperator TwofoldSystem::block_theta() const {
  BlockOperator b;
  b.blocks[0][0] = -t_.theta;
  b.blocks[0][1] = one_minus_g_adj();
  b.blocks[1][0] = one_minus_g();
  b.blocks[1][1] = -family_.r0();
  b.row_scale = {0.0, 1.0};
  b.col_scale = {0.0, -1.0};
  return b;
}

BlockOperator TwofoldSystem::block_theta_inverse() const {
  const int n = dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix r0 = dense_resolvent(hat_h0(), Complex(lambda0(), 0.0));
  const Matrix p = one_minus_g();
  const Matrix q = one_minus_g_adj();
  const double cl = family_.tolerances().cond_limit;
  const Matrix p_inv = inverse_checked<g_not_contractive>(p, cl, "1 - G");
  const Matrix q_inv = inverse_checked<g_not_contractive>(q, cl, "1 - G^*");
  const Matrix left_inv = inverse_checked<neumann_singular>(
      id - t_.theta * r0, cl, "1 - T Rhat_0");
  const Matrix right_inv = inverse_checked<neumann_singular>(
      id - r0 * t_.theta, cl, "1 - Rhat_0 T");
  const Matrix mh = -family_.op().matrix() + lambda0() * id;

  BlockOperator b;
  b.blocks[0][0] = r0 * left_inv;               // Rhat_T at lambda0
  b.blocks[0][1] = right_inv * p_inv;
  b.blocks[1][0] = q_inv * left_inv;
  b.blocks[1][1] = (q_inv * left_inv * q - id) * mh;
  b.row_scale = {0.0, -1.0};
  b.col_scale = {0.0, 1.0};
  return b;
}

GammaSearchResult TwofoldSystem::neumann_gamma_search() const {
  {
    std::lock_guard<std::mutex> lock(lazy_mutex_);
    if (gamma_) return *gamma_;
  }
  // Ladder starts at the spectral scale of H; the interpolation bound
  // ||G_{i gamma}|| <= ||A||_s / gamma^{1-s} needs gamma >= 1.
  const double base = std::max(1.0, family_.op().spectral_radius());
  for (int k = 0; k < 60; ++k) {
    const double gamma = base * std::pow(2.0, k);
    const Matrix g_plus = family_.gz(Complex(0.0, gamma));
    const Matrix g_minus = family_.gz(Complex(0.0, -gamma));
    const double n_plus = operator_norm(g_plus);
    const double n_minus = operator_norm(g_minus.adjoint());
    const double bound = a_scale_norm_ / std::pow(gamma, 1.0 - s_index_);
    if (n_plus > bound + 1e-12 || n_minus > bound + 1e-12)
      throw ladder_exhausted("neumann_gamma_search: decay bound violated");
    if (n_plus < 1.0 && n_minus < 1.0) {
      GammaSearchResult result{gamma, k, true};
      std::lock_guard<std::mutex> lock(lazy_mutex_);
      if (!gamma_) gamma_ = result;
      return *gamma_;
    }
  }
  throw ladder_exhausted("neumann_gamma_search: no contraction after 60 doublings");
}

double TwofoldSystem::relative_bound_estimate() const {
  {
    std::lock_guard<std::mutex> lock(lazy_mutex_);
    if (relative_bound_) return *relative_bound_;
  }
  const double gamma = neumann_gamma_search().gamma_star;
  const Matrix r0 = hat_h0_resolvent(Complex(0.0, gamma));
  const double estimate = operator_norm(t_.theta * r0);
  std::lock_guard<std::mutex> lock(lazy_mutex_);
  if (!relative_bound_) relative_bound_ = estimate;
  return *relative_bound_;
}

TwofoldSystem TwofoldSystem::with_reference_point(double lambda) const {
  const Matrix g_lambda = family_.gz(Complex(lambda, 0.0));
  // T_lambda = A (G - G_lambda); the same operator at the new reference
  // point carries the parameter T - T_lambda.
  const Matrix t_lambda = family_.sigma().matrix() * (family_.g0() - g_lambda);
  ExtensionParameter shifted{t_.theta - t_lambda, t_.kind};
  return TwofoldSystem(family_.op(), family_.sigma(), std::move(shifted),
                       s_index_, lambda, std::nullopt, family_.tolerances());
}

double contractive_lambda0(const SpectralOperator& h, const ChargeMap& a,
                           double target_norm, int max_steps) {
  double lambda = h.default_lambda0();
  if (lambda >= h.min_eigenvalue()) lambda = h.min_eigenvalue() - 1.0;
  double step = 1.0;
  for (int k = 0; k < max_steps; ++k) {
    const Matrix g = h.resolvent(Complex(lambda, 0.0)) * a.adjoint();
    if (operator_norm(g) <= target_norm) return lambda;
    lambda = h.min_eigenvalue() - step;
    step *= 2.0;
  }
  throw g_not_contractive("contractive_lambda0: ladder exhausted");
}

}  // namespace kreinforge
