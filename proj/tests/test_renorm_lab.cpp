#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kreinforge/linalg.hpp"
#include "kreinforge/renorm.hpp"

using namespace kreinforge;

namespace {

struct Base {
  SpectralOperator h;
  ChargeMap a;
  double lambda0;
};

Base random_base(std::uint64_t seed, int dim = 8, double charge_scale = 0.35) {
  RandomEngine rng(seed);
  SpectralOperator h =
      SpectralOperator::from_hermitian(rng.hermitian_in_band(dim, 0.5, 8.0));
  Matrix a_raw = rng.complex_matrix(dim, dim);
  ChargeMap a(charge_scale * a_raw / operator_norm(a_raw));
  const double lambda0 = contractive_lambda0(h, a);
  return {std::move(h), std::move(a), lambda0};
}

TwofoldSystem system_for(const Base& base, const Matrix& t) {
  return TwofoldSystem(base.h, base.a,
                       ExtensionParameter{t, ThetaKind::self_adjoint}, 0.5,
                       base.lambda0);
}

}  // namespace

TEST_CASE("approximate Hamiltonians") {
  SUBCASE("zero charge changes nothing") {
    auto base = random_base(801, 5);
    CutoffFamily family(base.h, ChargeMap::zero(5, 5), base.lambda0,
                        {CutoffStage{1.0, ChargeMap::zero(5, 5),
                                     Matrix::Zero(5, 5)}});
    auto [h_n, h_sub] = family.approx_hamiltonians(0);
    CHECK(operator_norm(h_n - base.h.matrix()) < 1e-13);
    CHECK(operator_norm(h_sub - base.h.matrix()) < 1e-13);
  }

  SUBCASE("two-dimensional instance against hand assembly") {
    RealVector ev(2);
    ev << 1.0, 2.0;
    SpectralOperator h = SpectralOperator::diagonal(ev);
    Matrix a_m = Matrix::Zero(2, 2);
    a_m(0, 1) = Complex(0.3, 0.1);  // annihilates the second mode
    // lambda0 = 0 (spectral gap), R = diag(-1, -1/2).
    CutoffFamily family(h, ChargeMap(a_m), 0.0,
                        {CutoffStage{1.0, ChargeMap(a_m), Matrix::Zero(2, 2)}});
    auto [h_n, h_sub] = family.approx_hamiltonians(0);
    Matrix expected_h = Matrix::Zero(2, 2);
    expected_h(0, 0) = 1.0;
    expected_h(1, 1) = 2.0;
    expected_h(0, 1) = Complex(0.3, 0.1);
    expected_h(1, 0) = std::conj(Complex(0.3, 0.1));
    CHECK(operator_norm(h_n - expected_h) < 1e-15);
    Matrix expected_sub = expected_h;
    expected_sub(0, 0) += std::norm(Complex(0.3, 0.1)) / 2.0;
    CHECK(operator_norm(h_sub - expected_sub) < 1e-15);
  }

  SUBCASE("both assemblies are Hermitian") {
    auto base = random_base(809);
    CutoffFamily family(
        base.h, base.a, base.lambda0,
        {CutoffStage{1.0, spectral_cutoff_charge(base.h, base.a, 4.0),
                     Matrix::Zero(8, 8)},
         CutoffStage{2.0, base.a, Matrix::Zero(8, 8)}});
    for (std::size_t i = 0; i < family.size(); ++i) {
      auto [h_n, h_sub] = family.approx_hamiltonians(i);
      CHECK(hermiticity_defect(h_n) < 1e-12);
      CHECK(hermiticity_defect(h_sub) < 1e-12);
    }
  }
}

TEST_CASE("cutoff schedules must tighten") {
  auto base = random_base(811);
  std::vector<CutoffStage> backwards = {
      CutoffStage{1.0, base.a, Matrix::Zero(8, 8)},
      CutoffStage{2.0, spectral_cutoff_charge(base.h, base.a, 2.0),
                  Matrix::Zero(8, 8)}};
  CHECK_THROWS_AS(
      CutoffFamily(base.h, base.a, base.lambda0, std::move(backwards)),
      dimension_mismatch);
}

TEST_CASE("regular approximation driver") {
  auto base = random_base(821);
  KreinFamily family(base.h, ChargeMap(base.a.matrix().topRows(3)),
                     base.lambda0);
  const ChargeMap sigma = family.sigma();
  const Matrix r = family.r0();
  const Matrix srs = sigma.matrix() * r * sigma.adjoint();
  RandomEngine rng(7);
  const Matrix theta_m = rng.hermitian(3, 1.0) + 3.0 * Matrix::Identity(3, 3);
  ExtensionParameter theta{theta_m, ThetaKind::self_adjoint};
  const std::vector<Complex> zs = {Complex(0.0, 2.0), Complex(0.0, -2.0)};

  SUBCASE("constant exact schedule reproduces the target at every index") {
    std::vector<RegularStage> schedule;
    for (double n : {1.0, 2.0, 4.0})
      schedule.push_back({n, sigma,
                          ExtensionParameter{theta_m + srs,
                                             ThetaKind::self_adjoint}});
    const auto report = regular_approximation_driver(family, theta, schedule, zs);
    for (const auto& row : report.rows) {
      CHECK(row.charge_distance < 1e-14);
      CHECK(row.parameter_distance < 1e-12);
      for (double d : row.d) CHECK(d < 1e-10);
    }
  }

  SUBCASE("scalar-parameter schedule converges") {
    // Theta chosen so that a scalar sequence g_n^{-1} renormalizes onto it:
    // Theta = c - Sigma R Sigma^*, Theta_n = (c + 1/n) * 1.
    const double c = 2.0;
    ExtensionParameter theta_scalar{c * Matrix::Identity(3, 3) - srs,
                                    ThetaKind::self_adjoint};
    std::vector<RegularStage> schedule;
    for (double n : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
      schedule.push_back({n, sigma, ExtensionParameter::scalar(c + 1.0 / n, 3)});
    const auto report =
        regular_approximation_driver(family, theta_scalar, schedule, zs);
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
      CHECK(report.column_decreasing(report.d_column(zi), false));
    CHECK(report.rows.back().d[0] < report.rows.front().d[0] / 4.0);
  }

  SUBCASE("shrinking perturbations trend monotonically") {
    RandomEngine pert(9);
    const Matrix dsigma = 0.3 * pert.complex_matrix(3, 8);
    const Matrix dtheta = 0.3 * pert.hermitian(3, 1.0);
    std::vector<RegularStage> schedule;
    for (double n : {2.0, 4.0, 8.0, 16.0, 32.0}) {
      ChargeMap sigma_n(sigma.matrix() + dsigma / n);
      const Matrix snrsn = sigma_n.matrix() * r * sigma_n.adjoint();
      schedule.push_back(
          {n, sigma_n,
           ExtensionParameter{theta_m + snrsn + dtheta / n,
                              ThetaKind::self_adjoint}});
    }
    const auto report = regular_approximation_driver(family, theta, schedule, zs);
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
      CHECK(report.column_decreasing(report.d_column(zi), false));
    // Cauchy increments shrink along the tail of the schedule.
    CHECK(report.rows.back().cauchy_d[0] < report.rows[1].cauchy_d[0]);
  }

  SUBCASE("singular stage parameter is refused") {
    std::vector<RegularStage> schedule = {
        {1.0, sigma, ExtensionParameter::scalar(0.0, 3)}};
    CHECK_THROWS_AS(regular_approximation_driver(family, theta, schedule, zs),
                    theta_singular);
  }
}

TEST_CASE("cutoff convergence driver") {
  auto base = random_base(823);
  RandomEngine rng(11);
  const Matrix t_ref = rng.hermitian(8, 0.3);
  const Matrix r = base.h.resolvent(Complex(base.lambda0, 0.0));

  SUBCASE("exact schedule reproduces both targets") {
    const Matrix ara = base.a.matrix() * r * base.a.adjoint();
    std::vector<CutoffStage> stages;
    for (double n : {1.0, 2.0, 3.0})
      stages.push_back(CutoffStage{n, base.a, t_ref - ara});
    CutoffFamily family(base.h, base.a, base.lambda0, std::move(stages));
    auto sys = system_for(base, t_ref);
    const auto report = cutoff_convergence_driver(
        sys, family, {Complex(0.0, 3.0), Complex(base.lambda0 - 2.0, 0.0)});
    for (const auto& row : report.rows) {
      CHECK(row.parameter_distance < 1e-12);
      for (double d : row.d) CHECK(d < 1e-10);
      for (double e : row.e) CHECK(e < 1e-10);
    }
    CHECK(report.relative_bound_below_one);
  }

  SUBCASE("spectral cutoffs converge against the converged parameter") {
    RandomEngine pert(13);
    const Matrix dtheta = pert.hermitian(8, 0.2);
    std::vector<CutoffStage> stages;
    const std::vector<double> radii = {2.0, 4.0, 6.0, 9.0};
    for (double n : radii) {
      ChargeMap a_n = spectral_cutoff_charge(base.h, base.a, n);
      const Matrix ara_n = a_n.matrix() * r * a_n.adjoint();
      stages.push_back(CutoffStage{n, a_n, t_ref - ara_n + dtheta / n});
    }
    CutoffFamily family(base.h, base.a, base.lambda0, std::move(stages));
    auto sys = system_for(base, t_ref);
    const auto gamma = sys.neumann_gamma_search().gamma_star;
    const std::vector<Complex> zs = {Complex(0.0, gamma)};

    const auto normal = cutoff_convergence_driver(sys, family, zs);
    CHECK(normal.d_strictly_decreasing(0));
    CHECK(normal.e_strictly_decreasing(0));
    CHECK(normal.rows.back().e[0] < 1e-10);
  }
}

TEST_CASE("counterterm ablation on a charge with a heavy top shell") {
  // Annihilator-style charge into the first basis slot with the bulk of the
  // form-factor mass on the highest shell: A_n R A_n^* keeps growing as the
  // shells open, and E_n is its exact compensation.
  RealVector ev(8);
  ev << 1.0, 2.0, 2.0, 2.0, 4.0, 4.0, 4.0, 20.0;
  SpectralOperator h = SpectralOperator::diagonal(ev);
  Matrix a_m = Matrix::Zero(8, 8);
  a_m(0, 1) = a_m(0, 2) = a_m(0, 3) = 0.1;
  a_m(0, 4) = a_m(0, 5) = a_m(0, 6) = 0.15;
  a_m(0, 7) = std::sqrt(0.7) * 21.0;
  ChargeMap a(a_m);
  const double lambda0 = contractive_lambda0(h, a);
  const Matrix r = h.resolvent(Complex(lambda0, 0.0));

  std::vector<CutoffStage> stages;
  for (double n : {1.0, 2.0, 4.0, 20.0}) {
    ChargeMap a_n = spectral_cutoff_charge(h, a, n);
    const Matrix compensation = -(a_n.matrix() * r * a_n.adjoint());
    stages.push_back(CutoffStage{n, a_n, compensation});
  }
  CutoffFamily family(h, a, lambda0, std::move(stages));
  TwofoldSystem sys(h, a,
                    ExtensionParameter{Matrix::Zero(8, 8),
                                       ThetaKind::self_adjoint},
                    0.5, lambda0);
  const std::vector<Complex> zs = {Complex(0.0, 2.0)};

  const auto normal = cutoff_convergence_driver(sys, family, zs);
  CHECK(normal.d_strictly_decreasing(0));
  CHECK(normal.e_strictly_decreasing(0));
  CHECK(normal.rows.back().e[0] < 1e-10);

  CutoffDriverOptions ablated;
  ablated.ablate_counterterm = true;
  const auto no_counterterm = cutoff_convergence_driver(sys, family, zs, ablated);
  CHECK(no_counterterm.d_strictly_decreasing(0));  // d ignores E_n
  CHECK_FALSE(no_counterterm.e_strictly_decreasing(0));
  CHECK(no_counterterm.rows.back().e[0] > 10.0 * normal.rows.back().e[0]);
}

TEST_CASE("smoothed cutoff charge") {
  SUBCASE("scalar closed form") {
    RealVector ev(1);
    ev << 1.5;
    SpectralOperator h = SpectralOperator::diagonal(ev);
    Matrix a_m(1, 1);
    a_m << Complex(0.7, -0.2);
    const double n = 8.0;
    const Complex ni(0.0, n);
    const Complex expected = Complex(0.7, -0.2) * ni / (ni - 1.5);
    const ChargeMap a_n = smoothed_cutoff_charge(h, ChargeMap(a_m), n);
    CHECK(std::abs(a_n.matrix()(0, 0) - expected) < 1e-15);
  }

  SUBCASE("entrywise convergence and 1/n decay") {
    auto base = random_base(827, 6);
    double prev = std::numeric_limits<double>::infinity();
    for (double n : {8.0, 16.0, 32.0, 64.0}) {
      const ChargeMap a_n = smoothed_cutoff_charge(base.h, base.a, n);
      const double dist = scale_norm(a_n.matrix() - base.a.matrix(), base.h, 1.0);
      CHECK(dist < prev);
      prev = dist;
    }
    // Rate ~ 1/n: doubling n roughly halves the distance.
    const double d32 =
        scale_norm(smoothed_cutoff_charge(base.h, base.a, 32.0).matrix() -
                       base.a.matrix(),
                   base.h, 1.0);
    const double d64 =
        scale_norm(smoothed_cutoff_charge(base.h, base.a, 64.0).matrix() -
                       base.a.matrix(),
                   base.h, 1.0);
    CHECK(d64 < 0.6 * d32);
    CHECK(d64 > 0.4 * d32);
  }
}

TEST_CASE("smoothing ladder drives the subtracted approximants to the target") {
  auto base = random_base(829, 6, 0.3);
  auto sys = system_for(base, Matrix::Zero(6, 6));
  const double gamma = sys.neumann_gamma_search().gamma_star;
  const double scale = base.h.spectral_radius();

  std::vector<CutoffStage> stages;
  for (int k = 0; k <= 16; ++k)
    stages.push_back(CutoffStage{scale * std::pow(2.0, k),
                                 smoothed_cutoff_charge(base.h, base.a,
                                                        scale * std::pow(2.0, k)),
                                 Matrix::Zero(6, 6)});
  CutoffFamily family(base.h, base.a, base.lambda0, std::move(stages));
  CutoffDriverOptions options;
  options.use_converged_parameter = false;  // compare against T = 0 directly
  const auto report = cutoff_convergence_driver(
      sys, family, {Complex(0.0, gamma)}, options);
  CHECK(report.d_strictly_decreasing(0));
  CHECK(report.rows.back().d[0] <= 1e-6);
}

TEST_CASE("report CSV schema is stable and deterministic") {
  ConvergenceReport report;
  report.z_points = {Complex(0.0, 2.0)};
  ConvergenceRow row;
  row.index = 1.0;
  row.charge_distance = 0.5;
  row.parameter_distance = 0.25;
  row.relative_bound = 0.1;
  row.d = {1e-3};
  row.e = {2e-3};
  row.cauchy_d = {0.0};
  row.cauchy_e = {0.0};
  report.rows.push_back(row);

  std::ostringstream first, second;
  report.write_csv(first);
  report.write_csv(second);
  CHECK(first.str() == second.str());
  CHECK(first.str().substr(0, first.str().find('\n')) ==
        "n,norm_A_diff,norm_T_diff,relative_bound,d_z0,e_z0,cauchy_d_z0,"
        "cauchy_e_z0");
}
