#include "kreinforge/check_suite.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kreinforge/linalg.hpp"
#include "kreinforge/parallel.hpp"
#include "kreinforge/report_io.hpp"
#include "kreinforge/twofold.hpp"

namespace kreinforge {

namespace {

struct Accumulator {
  std::vector<CheckRow> rows;

  void record(const std::string& name, double residual, double tolerance) {
    for (auto& r : rows) {
      if (r.name == name) {
        r.residual = std::max(r.residual, residual);
        r.pass = r.residual <= r.tolerance;
        return;
      }
    }
    rows.push_back(CheckRow{name, residual, tolerance, residual <= tolerance});
  }
};

}  // namespace

std::vector<CheckRow> run_check_suite(const CheckSuiteOptions& o) {
  Accumulator acc;
  const double ts = o.tolerance_scale;

  for (int inst = 0; inst < o.instances; ++inst) {
    RandomEngine rng(o.seed + 1000 * static_cast<std::uint64_t>(inst));

    // Single-stage instance: generic Hermitian H, rectangular charge.
    SpectralOperator h =
        SpectralOperator::from_hermitian(rng.hermitian(o.dim, 10.0));
    ChargeMap sigma(rng.complex_matrix(o.target_dim, o.dim));
    Matrix theta_m = rng.hermitian(o.target_dim, 2.0);
    if (o.inject_defect && inst == 0) theta_m(0, o.target_dim - 1) += Complex(0.5, 0.3);
    ExtensionParameter theta{theta_m, ThetaKind::self_adjoint};
    KreinFamily family(h, sigma);

    const Complex z(0.4 + 0.2 * rng.uniform(), 1.0 + rng.uniform());
    const Complex w(-0.7 + 0.3 * rng.uniform(), -1.2 - rng.uniform());

    // Resolvent translation: (z - w) R_w G_z = G_w - G_z.
    acc.record("charge_field_translation",
               operator_norm((z - w) * h.resolvent(w) * family.gz(z) -
                             (family.gz(w) - family.gz(z))),
               1e-11 * ts);
    acc.record("weyl_adjoint_symmetry",
               operator_norm(family.weyl(z).adjoint() - family.weyl(std::conj(z))),
               1e-11 * ts);
    acc.record("weyl_difference",
               operator_norm(family.weyl(z) - family.weyl(w) -
                             (z - w) * family.gz(std::conj(w)).adjoint() *
                                 family.gz(z)),
               1e-11 * ts);

    const Matrix kz = family.krein_resolvent(theta, z);
    const Matrix kw = family.krein_resolvent(theta, w);
    acc.record("pseudo_resolvent_law",
               operator_norm(kz - kw - (w - z) * kz * kw), 1e-10 * ts);
    acc.record("resolvent_adjoint_symmetry",
               operator_norm(kz.adjoint() -
                             family.krein_resolvent(theta, std::conj(z))),
               1e-10 * ts);

    RandomEngine green_rng(o.seed + 77 + inst);
    acc.record("green_identity", green_identity_check(family, 20, green_rng),
               1e-10 * ts);

    ExtensionParameter theta0{rng.hermitian(o.target_dim, 2.0) +
                                  3.0 * Matrix::Identity(o.target_dim, o.target_dim),
                              ThetaKind::self_adjoint};
    acc.record("regular_singular_equivalence",
               regular_equivalence(h, sigma, theta0, z), 1e-10 * ts);

    // Reference-point invariance of the single-stage formula.
    {
      const double l0 = family.lambda0();
      const double l1 = l0 - 1.5;
      KreinFamily shifted(h, sigma, l1);
      const Matrix correction =
          sigma.matrix() * (family.g0() - family.gz(Complex(l1, 0.0)));
      ExtensionParameter theta_shifted{theta.theta + correction,
                                       ThetaKind::self_adjoint};
      acc.record("reference_point_invariance",
                 operator_norm(shifted.krein_resolvent(theta_shifted, z) - kz),
                 1e-10 * ts);
    }

    // Two-stage instance: semibounded H, contractive reference point,
    // square charge, small symmetric parameter.
    SpectralOperator hs =
        SpectralOperator::from_hermitian(rng.hermitian_in_band(o.dim, 0.5, 10.0));
    Matrix a_raw = rng.complex_matrix(o.dim, o.dim);
    ChargeMap a(0.4 * a_raw / std::max(1.0, operator_norm(a_raw)));
    const double lambda0 = contractive_lambda0(hs, a);
    Matrix t_m = rng.hermitian(o.dim, 0.5);
    TwofoldSystem sys(hs, a, ExtensionParameter{t_m, ThetaKind::self_adjoint},
                      0.5, lambda0);

    const Matrix hat_h0 = sys.hat_h0();
    acc.record("quadratic_form_factorization",
               operator_norm(sys.hat_h0_factorized() -
                             (lambda0 * Matrix::Identity(o.dim, o.dim) - hat_h0)),
               1e-12 * ts);
    {
      // Reconstruct Hhat_0 from the block resolvent with T = 0 instead.
      TwofoldSystem sys0(hs, a,
                         ExtensionParameter{Matrix::Zero(o.dim, o.dim),
                                            ThetaKind::self_adjoint},
                         0.5, lambda0);
      const Complex zb(0.3, 2.0);
      const Matrix rhat = sys0.twofold_resolvent(zb);
      const Matrix recon =
          zb * Matrix::Identity(o.dim, o.dim) -
          inverse_checked<block_singular>(rhat, 1e12, "check: rhat inverse");
      acc.record("factorization_vs_block_resolvent",
                 operator_norm(sys.hat_h0_factorized() -
                               (lambda0 * Matrix::Identity(o.dim, o.dim) - recon)),
                 1e-9 * ts);
    }

    const Complex z2(0.2, 1.5 + rng.uniform());
    acc.record("block_vs_composition",
               operator_norm(sys.twofold_resolvent(z2) -
                             sys.res_t_composition(z2)),
               1e-9 * ts);
    {
      const Matrix lhs =
          sys.block_theta().multiply(sys.block_theta_inverse()).assemble();
      acc.record("block_parameter_inverse",
                 operator_norm(lhs - Matrix::Identity(2 * o.dim, 2 * o.dim)),
                 1e-9 * ts);
      const Matrix g = sys.g0();
      Matrix gg(o.dim, 2 * o.dim);
      gg.leftCols(o.dim) = g;
      gg.rightCols(o.dim) = sys.r0();
      const Matrix tt_lhs =
          sys.r0() + gg * sys.block_theta_inverse().assemble() * gg.adjoint();
      acc.record("block_parameter_identity",
                 operator_norm(tt_lhs - sys.res_t_composition(Complex(
                                            sys.lambda0(), 0.0))),
                 1e-9 * ts);
    }
    acc.record("extended_charge_left_inverse",
               sys.hat_g_left_inverse_residual(z2), 1e-11 * ts);
    {
      const TwofoldSystem shifted = sys.with_reference_point(lambda0 - 2.0);
      acc.record("two_stage_reference_invariance",
                 operator_norm(shifted.twofold_resolvent(z2) -
                               sys.twofold_resolvent(z2)),
                 1e-9 * ts);
    }
  }
  return acc.rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

void write_check_csv(std::ostream& out, const std::vector<CheckRow>& rows) {
  CsvWriter csv(out);
  csv.header({"check", "max_residual", "tolerance", "status"});
  for (const auto& r : rows) {
    csv.begin_row();
    csv.field(r.name);
    csv.field(r.residual);
    csv.field(r.tolerance);
    csv.field(std::string(r.pass ? "pass" : "fail"));
    csv.end_row();
  }
}

}  // namespace kreinforge
