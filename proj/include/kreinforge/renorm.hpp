#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kreinforge/twofold.hpp"

namespace kreinforge {

// One rung of an ultraviolet cutoff schedule: a regularized charge A_n and a
// bounded symmetric counterterm E_n.
struct CutoffStage {
  double index;       // cutoff parameter n
  ChargeMap charge;   // A_n, everywhere defined on the ambient space
  Matrix counterterm; // E_n, Hermitian
};

// Cutoff family (A_n, E_n) with the derived parameters T_n = A_n R A_n^* +
// E_n relative to a fixed base pair (H, A) and reference point lambda_0.
// The charge distances ||A_n - A|| from the form domain into the ambient
// space must be nonincreasing along the schedule; this is enforced at
// construction.
class CutoffFamily {
 public:
  CutoffFamily(SpectralOperator h, ChargeMap a, double lambda0,
               std::vector<CutoffStage> stages);

  const SpectralOperator& op() const { return h_; }
  const ChargeMap& limit_charge() const { return a_; }
  double lambda0() const { return lambda0_; }
  std::size_t size() const { return stages_.size(); }
  const CutoffStage& stage(std::size_t i) const { return stages_.at(i); }
  double charge_distance(std::size_t i) const { return charge_distance_.at(i); }

  Matrix derived_parameter(std::size_t i) const;  // T_n

  // H_n = H + A_n^* + A_n and the subtracted H~_n = H_n - A_n R A_n^*;
  // both Hermitian.
  std::pair<Matrix, Matrix> approx_hamiltonians(std::size_t i) const;

 private:
  SpectralOperator h_;
  ChargeMap a_;
  double lambda0_;
  std::vector<CutoffStage> stages_;
  std::vector<double> charge_distance_;
};

// Per-index diagnostics of a convergence run.  d-columns compare the
// subtracted approximants against the T = 0 target, e-columns the
// counterterm-corrected approximants against the T-target; the cauchy
// columns hold successive approximant increments.
struct ConvergenceRow {
  double index = 0.0;
  double charge_distance = 0.0;      // ||A_n - A|| (form domain -> ambient)
  double parameter_distance = 0.0;   // ||T_n - T||
  double relative_bound = 0.0;       // ||T_n (-H~_n + i gamma)^{-1}||
  std::vector<double> d;             // per z
  std::vector<double> e;             // per z
  std::vector<double> cauchy_d;      // per z
  std::vector<double> cauchy_e;      // per z
};

struct ConvergenceReport {
  std::vector<Complex> z_points;
  std::vector<ConvergenceRow> rows;
  bool relative_bound_below_one = false;

  bool column_decreasing(const std::vector<double>& col, bool strict) const;
  std::vector<double> d_column(std::size_t zi) const;
  std::vector<double> e_column(std::size_t zi) const;
  bool d_strictly_decreasing(std::size_t zi) const;
  bool e_strictly_decreasing(std::size_t zi) const;

  void write_csv(std::ostream& out) const;
};

// One rung of a regular-perturbation schedule (Sigma_n, Theta_n) with
// invertible Theta_n.
struct RegularStage {
  double index;
  ChargeMap sigma;
  ExtensionParameter theta;
};

// Drives the approximation of K_Theta by the regular perturbations
// H + Sigma_n^* Theta_n^{-1} Sigma_n.  Reports per index the charge distance
// ||Sigma_n - Sigma||, the parameter distance ||(Theta_n - Sigma_n R
// Sigma_n^*) - Theta|| and, per z, the norm distance between the dense
// resolvent of the perturbed operator and the singular-formula resolvent.
ConvergenceReport regular_approximation_driver(
    const KreinFamily& k, const ExtensionParameter& theta,
    const std::vector<RegularStage>& schedule, const std::vector<Complex>& zs,
    int jobs = 1);

// Drives the cutoff renormalization scheme against the two-stage targets:
// d_n(z) = ||(-H~_n + z)^{-1} - Rhat_0(z)|| and e_n(z) = ||(-(H_n + E_n) +
// z)^{-1} - Rhat_T(z)||.  T defaults to the derived parameter at the largest
// index when the system's own parameter should be replaced (pass
// `use_converged_parameter`).  `ablate_counterterm` zeroes every E_n in the
// e-column to expose the counterterm's role.
struct CutoffDriverOptions {
  bool use_converged_parameter = true;
  bool ablate_counterterm = false;
  int jobs = 1;
};

ConvergenceReport cutoff_convergence_driver(const TwofoldSystem& system,
                                            const CutoffFamily& family,
                                            const std::vector<Complex>& zs,
                                            const CutoffDriverOptions& options = {});

// Canonical smoothing A_n = n i A R_{n i}; converges to A entrywise on a
// finite spectrum at rate 1/n.
ChargeMap smoothed_cutoff_charge(const SpectralOperator& h, const ChargeMap& a,
                                 double n);

// Spectral-projector cutoff A P_{|H| <= n} (columns beyond the cutoff in the
// eigenbasis ordering are dropped).
ChargeMap spectral_cutoff_charge(const SpectralOperator& h, const ChargeMap& a,
                                 double n);

}  // namespace kreinforge
