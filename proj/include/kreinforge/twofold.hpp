#pragma once

#include <array>
#include <memory>
#include <optional>

#include "kreinforge/krein.hpp"

namespace kreinforge {

// 2x2 operator block with scale annotations.  The tags record which scale
// space each row/column slot lives in (0 for the plain space, +-1 for the
// form domain and its dual) and are checked under composition.
struct BlockOperator {
  std::array<std::array<Matrix, 2>, 2> blocks;
  std::array<double, 2> row_scale{0.0, 0.0};
  std::array<double, 2> col_scale{0.0, 0.0};

  Matrix assemble() const;
  BlockOperator multiply(const BlockOperator& rhs) const;
};

struct GammaSearchResult {
  double gamma_star = 0.0;    // smallest ladder point with both contractions
  int ladder_steps = 0;       // doublings taken from the base
  bool decay_certified = false;  // measured ||G_{i gamma}|| <= a_s gamma^{s-1}
};

enum class SchurMode { dense, first, second };

// Two-stage realization of H + A^* + A_T for a charge A acting inside the
// ambient space itself.  Stage one forms H_T through the single-stage family
// with parameter -T; stage two extends by the complementary charge 1 - A_*.
// What survives to finite dimension is the collection of closed formulas:
//
//   A_T G_z   = T - A (G - G_z)
//   R_T(z)    = R_z - G_z (A_T G_z)^{-1} G_{zbar}^*
//   Ghat_z    = R_T(z) + G_z (A_T G_z)^{-1}
//             = R_z + G_z (A_T G_z)^{-1} (1 - G_{zbar}^*)
//   ShatGhat_z = R_z - (1 - G_z)(A_T G_z)^{-1}(1 - G_{zbar}^*)
//
// and the block resolvent
//
//   Rhat(z) = R_z - [G_z  R_z] * B(z)^{-1} * [G_{zbar}^* ; R_z],
//   B(z)    = [[A_T G_z, G_{zbar}^* - 1], [G_z - 1, R_z]],
//
// together with the quadratic-form factorization
//   -Hhat_0 + lambda_0 = (1 - G^*)(-H + lambda_0)(1 - G)
// and the additive composition Rhat_T = Rhat_0 + Rhat_0 (1 - T Rhat_0)^{-1} T
// Rhat_0.
class TwofoldSystem {
 public:
  // `s_index` declares the scale index s in (0,1) under which A is bounded;
  // ||A||_{scale s -> plain} is recorded at construction.  When T is flagged
  // symmetric_only, the relative bound of T against Hhat_0 is estimated as
  // ||T Rhat_0(i gamma_star)|| and must come out below one.
  TwofoldSystem(SpectralOperator h, ChargeMap a, ExtensionParameter t,
                double s_index = 0.5,
                std::optional<double> lambda0 = std::nullopt,
                std::optional<double> hat_lambda0 = std::nullopt,
                Tolerances tol = Tolerances{});

  const SpectralOperator& op() const { return family_.op(); }
  const ChargeMap& charge() const { return family_.sigma(); }
  const ExtensionParameter& parameter() const { return t_; }
  const KreinFamily& family() const { return family_; }
  double lambda0() const { return family_.lambda0(); }
  double hat_lambda0() const;
  double s_index() const { return s_index_; }
  double charge_scale_norm() const { return a_scale_norm_; }
  // Relative-bound estimate of T against Hhat_0 (lazy; only forced at
  // construction for symmetric_only parameters).
  double relative_bound_estimate() const;
  int dim() const { return family_.dim(); }

  Matrix gz(Complex z) const { return family_.gz(z); }
  Matrix g0() const { return family_.g0(); }
  Matrix r0() const { return family_.r0(); }

  Matrix at_gz(Complex z) const;                  // A_T G_z
  Matrix first_stage_resolvent(Complex z) const;  // R_T(z)
  Matrix hat_g(Complex z) const;                  // Ghat_z
  Matrix sigma_hat_g(Complex z) const;            // ShatGhat_z
  // Extended charge applied to Ghat_z: A_* Ghat_z = (A_T G_z)^{-1}(1 - G_{zbar}^*).
  Matrix astar_hat_g(Complex z) const;
  // ||A_T Ghat_z - 1|| with A_T = A_0 + T A_* evaluated through the charge
  // decomposition of Ghat_z's columns.
  double hat_g_left_inverse_residual(Complex z) const;
  // Stage-two reference parameter -ShatGhat at hat_lambda0.
  Matrix theta_hat() const;

  Matrix twofold_resolvent(Complex z, SchurMode mode = SchurMode::dense) const;
  // Same operator through the stage-two family on H_T (diagnostic route).
  Matrix twofold_resolvent_via_stages(Complex z) const;
  // Block pivot B(z) of the resolvent formula.
  Matrix block_pivot(Complex z) const;

  Matrix hat_h0_factorized() const;  // -Hhat_0 + lambda_0
  Matrix hat_h0() const;
  Matrix hat_h0_resolvent(Complex z) const;
  Matrix res_t_composition(Complex z) const;

  BlockOperator block_theta() const;          // [[-T, 1-G^*], [1-G, -R]]
  BlockOperator block_theta_inverse() const;  // explicit inverse via Rhat_T

  GammaSearchResult neumann_gamma_search() const;

  // Shifted reference point lambda with the compensating parameter
  // T - T_lambda, T_lambda = A (G - G_lambda); realizes the same operator.
  TwofoldSystem with_reference_point(double lambda) const;

 private:
  Matrix one_minus_g() const;
  Matrix one_minus_g_adj() const;

  KreinFamily family_;
  ExtensionParameter t_;
  double s_index_;
  double a_scale_norm_;
  // Lazily resolved quantities; guarded so concurrent scans can share one
  // system, matching the single-stage cache contract.
  mutable std::mutex lazy_mutex_;
  mutable std::optional<double> hat_lambda0_;
  mutable std::optional<double> relative_bound_;
  mutable std::optional<GammaSearchResult> gamma_;
};

// Picks a reference point lambda0 <= default for which ||G_{lambda0}|| <=
// `target_norm`, walking away from the spectrum by doubling steps.  Used to
// set up semibounded instances before constructing a TwofoldSystem.
double contractive_lambda0(const SpectralOperator& h, const ChargeMap& a,
                           double target_norm = 0.9, int max_steps = 60);

}  // namespace kreinforge
