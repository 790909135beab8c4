#include "kreinforge/renorm.hpp"

#include <cmath>
#include <ostream>

#include "kreinforge/linalg.hpp"
#include "kreinforge/parallel.hpp"
#include "kreinforge/report_io.hpp"

namespace kreinforge {

CutoffFamily::CutoffFamily(SpectralOperator h, ChargeMap a, double lambda0,
                           std::vector<CutoffStage> stages)
    : h_(std::move(h)), a_(std::move(a)), lambda0_(lambda0),
      stages_(std::move(stages)) {
  if (a_.dim() != h_.dim() || a_.target_dim() != h_.dim())
    throw dimension_mismatch("CutoffFamily: charge must act inside the ambient space");
  if (stages_.empty()) throw dimension_mismatch("CutoffFamily: empty schedule");
  charge_distance_.reserve(stages_.size());
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& s : stages_) {
    if (s.charge.dim() != h_.dim() || s.charge.target_dim() != h_.dim())
      throw dimension_mismatch("CutoffFamily: stage charge dimension mismatch");
    if (hermiticity_defect(s.counterterm) > 1e-12)
      throw dimension_mismatch("CutoffFamily: counterterm not Hermitian");
    const double dist =
        scale_norm(s.charge.matrix() - a_.matrix(), h_, 1.0);
    if (dist > prev + 1e-12)
      throw dimension_mismatch(
          "CutoffFamily: charge distances must be nonincreasing along the schedule");
    charge_distance_.push_back(dist);
    prev = dist;
  }
}

Matrix CutoffFamily::derived_parameter(std::size_t i) const {
  const CutoffStage& s = stages_.at(i);
  const Matrix r = h_.resolvent(Complex(lambda0_, 0.0));
  return s.charge.matrix() * r * s.charge.adjoint() + s.counterterm;
}

std::pair<Matrix, Matrix> CutoffFamily::approx_hamiltonians(std::size_t i) const {
  const CutoffStage& s = stages_.at(i);
  const Matrix h_n = h_.matrix() + s.charge.adjoint() + s.charge.matrix();
  const Matrix r = h_.resolvent(Complex(lambda0_, 0.0));
  const Matrix subtracted =
      h_n - s.charge.matrix() * r * s.charge.adjoint();
  return {h_n, subtracted};
}

bool ConvergenceReport::column_decreasing(const std::vector<double>& col,
                                          bool strict) const {
  for (std::size_t i = 1; i < col.size(); ++i) {
    if (strict ? !(col[i] < col[i - 1]) : col[i] > col[i - 1] * (1.0 + 1e-9) + 1e-14)
      return false;
  }
  return true;
}

std::vector<double> ConvergenceReport::d_column(std::size_t zi) const {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& r : rows) col.push_back(r.d.at(zi));
  return col;
}

std::vector<double> ConvergenceReport::e_column(std::size_t zi) const {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& r : rows) col.push_back(r.e.at(zi));
  return col;
}

bool ConvergenceReport::d_strictly_decreasing(std::size_t zi) const {
  return column_decreasing(d_column(zi), true);
}

bool ConvergenceReport::e_strictly_decreasing(std::size_t zi) const {
  return column_decreasing(e_column(zi), true);
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  CsvWriter csv(out);
  std::vector<std::string> header = {"n", "norm_A_diff", "norm_T_diff",
                                     "relative_bound"};
  for (std::size_t zi = 0; zi < z_points.size(); ++zi) {
    const std::string tag = std::to_string(zi);
    header.push_back("d_z" + tag);
    header.push_back("e_z" + tag);
    header.push_back("cauchy_d_z" + tag);
    header.push_back("cauchy_e_z" + tag);
  }
  csv.header(header);
  for (const auto& r : rows) {
    csv.begin_row();
    csv.field(r.index);
    csv.field(r.charge_distance);
    csv.field(r.parameter_distance);
    csv.field(r.relative_bound);
    for (std::size_t zi = 0; zi < z_points.size(); ++zi) {
      csv.field(r.d.at(zi));
      csv.field(r.e.at(zi));
      csv.field(r.cauchy_d.at(zi));
      csv.field(r.cauchy_e.at(zi));
    }
    csv.end_row();
  }
}

ConvergenceReport regular_approximation_driver(
    const KreinFamily& k, const ExtensionParameter& theta,
    const std::vector<RegularStage>& schedule, const std::vector<Complex>& zs,
    int jobs) {
  ConvergenceReport report;
  report.z_points = zs;
  report.rows.resize(schedule.size());
  std::vector<Matrix> targets(zs.size());
  for (std::size_t zi = 0; zi < zs.size(); ++zi)
    targets[zi] = k.krein_resolvent(theta, zs[zi]);
  const Matrix r = k.r0();
  const double cond_limit = k.tolerances().cond_limit;

  parallel_for(schedule.size(), jobs, [&](std::size_t i) {
    const RegularStage& stage = schedule[i];
    ConvergenceRow row;
    row.index = stage.index;
    row.charge_distance = scale_norm(
        stage.sigma.matrix() - k.sigma().matrix(), k.op(), 1.0);
    const Matrix renormalized =
        stage.theta.theta - stage.sigma.matrix() * r * stage.sigma.adjoint();
    row.parameter_distance = operator_norm(renormalized - theta.theta);
    const Matrix theta_inv = inverse_checked<theta_singular>(
        stage.theta.theta, cond_limit, "regular stage parameter");
    const Matrix perturbed =
        k.op().matrix() + stage.sigma.adjoint() * theta_inv * stage.sigma.matrix();
    row.d.resize(zs.size());
    row.e.assign(zs.size(), 0.0);
    row.cauchy_d.assign(zs.size(), 0.0);
    row.cauchy_e.assign(zs.size(), 0.0);
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
      row.d[zi] = operator_norm(dense_resolvent(perturbed, zs[zi]) - targets[zi]);
    report.rows[i] = std::move(row);
  });

  // Cauchy increments against the previous stage, ordered by index.
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const Matrix prev_theta_inv = inverse_checked<theta_singular>(
        schedule[i - 1].theta.theta, cond_limit, "regular stage parameter");
    const Matrix prev = k.op().matrix() + schedule[i - 1].sigma.adjoint() *
                                              prev_theta_inv *
                                              schedule[i - 1].sigma.matrix();
    const Matrix theta_inv = inverse_checked<theta_singular>(
        schedule[i].theta.theta, cond_limit, "regular stage parameter");
    const Matrix cur = k.op().matrix() + schedule[i].sigma.adjoint() *
                                             theta_inv *
                                             schedule[i].sigma.matrix();
    for (std::size_t zi = 0; zi < zs.size(); ++zi)
      report.rows[i].cauchy_d[zi] = operator_norm(
          dense_resolvent(cur, zs[zi]) - dense_resolvent(prev, zs[zi]));
  }
  return report;
}

ConvergenceReport cutoff_convergence_driver(const TwofoldSystem& system,
                                            const CutoffFamily& family,
                                            const std::vector<Complex>& zs,
                                            const CutoffDriverOptions& options) {
  if (std::abs(system.lambda0() - family.lambda0()) > 1e-12)
    throw dimension_mismatch(
        "cutoff_convergence_driver: system and family reference points differ");
  const std::size_t count = family.size();
  Matrix t_target;
  if (options.use_converged_parameter) {
    t_target = family.derived_parameter(count - 1);
    t_target = 0.5 * (t_target + t_target.adjoint().eval());
  } else {
    t_target = system.parameter().theta;
  }
  const TwofoldSystem target_system(
      system.op(), system.charge(),
      ExtensionParameter{t_target, ThetaKind::self_adjoint}, system.s_index(),
      system.lambda0(), std::nullopt, system.family().tolerances());

  ConvergenceReport report;
  report.z_points = zs;
  report.rows.resize(count);
  const double gamma_ref = target_system.neumann_gamma_search().gamma_star;

  std::vector<Matrix> d_targets(zs.size()), e_targets(zs.size());
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    d_targets[zi] = target_system.hat_h0_resolvent(zs[zi]);
    e_targets[zi] = target_system.res_t_composition(zs[zi]);
  }

  std::vector<Matrix> subtracted(count), corrected(count);
  parallel_for(count, options.jobs, [&](std::size_t i) {
    auto [h_n, h_sub] = family.approx_hamiltonians(i);
    Matrix e_n = family.stage(i).counterterm;
    if (options.ablate_counterterm) e_n.setZero();
    ConvergenceRow row;
    row.index = family.stage(i).index;
    row.charge_distance = family.charge_distance(i);
    const Matrix t_n = family.derived_parameter(i);
    row.parameter_distance = operator_norm(t_n - t_target);
    row.relative_bound = operator_norm(
        t_n * dense_resolvent(h_sub, Complex(0.0, gamma_ref)));
    row.d.resize(zs.size());
    row.e.resize(zs.size());
    row.cauchy_d.assign(zs.size(), 0.0);
    row.cauchy_e.assign(zs.size(), 0.0);
    subtracted[i] = h_sub;
    corrected[i] = h_n + e_n;
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
      row.d[zi] = operator_norm(dense_resolvent(h_sub, zs[zi]) - d_targets[zi]);
      row.e[zi] =
          operator_norm(dense_resolvent(corrected[i], zs[zi]) - e_targets[zi]);
    }
    report.rows[i] = std::move(row);
  });

  for (std::size_t i = 1; i < count; ++i)
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
      report.rows[i].cauchy_d[zi] =
          operator_norm(dense_resolvent(subtracted[i], zs[zi]) -
                        dense_resolvent(subtracted[i - 1], zs[zi]));
      report.rows[i].cauchy_e[zi] =
          operator_norm(dense_resolvent(corrected[i], zs[zi]) -
                        dense_resolvent(corrected[i - 1], zs[zi]));
    }

  report.relative_bound_below_one = true;
  for (const auto& r : report.rows)
    if (!(r.relative_bound < 1.0)) report.relative_bound_below_one = false;
  return report;
}

ChargeMap smoothed_cutoff_charge(const SpectralOperator& h, const ChargeMap& a,
                                 double n) {
  const Complex ni(0.0, n);
  return ChargeMap(ni * (a.matrix() * h.resolvent(ni)));
}

ChargeMap spectral_cutoff_charge(const SpectralOperator& h, const ChargeMap& a,
                                 double n) {
  const Matrix projector = h.apply([n](double lambda) {
    return std::abs(lambda) <= n ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  });
  return ChargeMap(a.matrix() * projector);
}

}  // namespace kreinforge
