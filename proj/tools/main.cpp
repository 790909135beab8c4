#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kreinforge/check_suite.hpp"
#include "kreinforge/config.hpp"
#include "kreinforge/linalg.hpp"
#include "kreinforge/parallel.hpp"
#include "kreinforge/report_io.hpp"

namespace kf = kreinforge;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::binary);
  out << content;
}

int run_check(const kf::RunConfig& run) {
  kf::CheckSuiteOptions options;
  options.seed = run.seed;
  options.inject_defect = run.inject_defect;
  if (run.tolerance) options.tolerance_scale = *run.tolerance / 1e-10;
  options.jobs = kf::resolve_jobs(run.jobs);
  const auto rows = kf::run_check_suite(options);

  std::ostringstream csv;
  kf::write_check_csv(csv, rows);
  write_file(run.out_dir, "check.csv", csv.str());
  for (const auto& r : rows)
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << "  residual=" << kf::CsvWriter::format(r.residual)
              << "  tolerance=" << kf::CsvWriter::format(r.tolerance) << "\n";
  return kf::all_pass(rows) ? 0 : kExitFailure;
}

int run_scan(const kf::RunConfig& run) {
  kf::ScanConfig cfg;
  if (std::holds_alternative<kf::ScanConfig>(run.model))
    cfg = std::get<kf::ScanConfig>(run.model);

  kf::RandomEngine rng(run.seed);
  kf::SpectralOperator h =
      kf::SpectralOperator::from_hermitian(rng.hermitian(cfg.dim, 10.0));
  kf::ChargeMap sigma(rng.complex_matrix(cfg.target_dim, cfg.dim));
  kf::KreinFamily family(h, sigma);
  const kf::Matrix r = family.r0();
  const kf::Matrix srs = sigma.matrix() * r * sigma.adjoint();
  const int td = cfg.target_dim;

  kf::Matrix theta_m;
  if (cfg.mode == "grisem")
    theta_m = 2.0 * kf::Matrix::Identity(td, td) - srs;
  else
    theta_m = rng.hermitian(td, 1.0) + 3.0 * kf::Matrix::Identity(td, td);
  kf::ExtensionParameter theta{theta_m, kf::ThetaKind::self_adjoint};

  const kf::Matrix delta_sigma = rng.complex_matrix(td, cfg.dim);
  const kf::Matrix delta_theta = rng.hermitian(td, 1.0);
  std::vector<kf::RegularStage> schedule;
  for (double n : cfg.indices) {
    if (cfg.mode == "exact") {
      schedule.push_back({n, sigma,
                          kf::ExtensionParameter{theta_m + srs,
                                                 kf::ThetaKind::self_adjoint}});
    } else if (cfg.mode == "grisem") {
      const double gn_inv = 2.0 + 1.0 / n;
      schedule.push_back(
          {n, sigma, kf::ExtensionParameter::scalar(gn_inv, td)});
    } else {
      kf::ChargeMap sigma_n(sigma.matrix() + delta_sigma / n);
      const kf::Matrix snrsn = sigma_n.matrix() * r * sigma_n.adjoint();
      schedule.push_back(
          {n, sigma_n,
           kf::ExtensionParameter{theta_m + snrsn + delta_theta / n,
                                  kf::ThetaKind::self_adjoint}});
    }
  }

  std::vector<kf::Complex> zs = run.z_points;
  if (zs.empty()) zs = {kf::Complex(0.0, 2.0), kf::Complex(0.0, -2.0)};
  const auto report = kf::regular_approximation_driver(
      family, theta, schedule, zs, kf::resolve_jobs(run.jobs));

  std::ostringstream csv;
  report.write_csv(csv);
  write_file(run.out_dir, "report.csv", csv.str());

  json summary;
  summary["mode"] = cfg.mode;
  summary["indices"] = cfg.indices;
  summary["final_charge_distance"] = report.rows.back().charge_distance;
  summary["final_parameter_distance"] = report.rows.back().parameter_distance;
  for (std::size_t zi = 0; zi < zs.size(); ++zi) {
    summary["final_distance"].push_back(report.rows.back().d[zi]);
    summary["distance_decreasing"].push_back(
        report.column_decreasing(report.d_column(zi), false));
  }
  write_file(run.out_dir, "summary.json", summary.dump(2) + "\n");
  return 0;
}

int run_delta1d(const kf::RunConfig& run) {
  if (!std::holds_alternative<kf::Delta1DConfig>(run.model))
    throw kf::config_error("delta1d: --config with model \"delta1d\" required");
  const auto cfg = std::get<kf::Delta1DConfig>(run.model);
  auto [h, sigma] = kf::delta1d_build(cfg);

  const double energy = kf::delta1d_bound_state(cfg);
  const double target = -cfg.alpha * cfg.alpha / 4.0;

  std::ostringstream csv;
  kf::CsvWriter writer(csv);
  writer.header({"z_re", "z_im", "kernel_re", "kernel_im", "herglotz_ok"});
  bool herglotz_all = true;
  std::vector<kf::Complex> zs = run.z_points;
  if (zs.empty())
    for (int i = 1; i <= 8; ++i) {
      zs.push_back(kf::Complex(-1.0 + 0.4 * i, 0.7 * i));
      zs.push_back(kf::Complex(-1.0 + 0.4 * i, -0.7 * i));
    }
  for (const auto& z : zs) {
    const kf::Complex v = kf::point_interaction_kernel(h, sigma, z);
    // R_z = (-H + z)^{-1}, so Im(Sigma R_z Sigma^*) carries the opposite
    // sign of Im(z); equivalently -Sigma R_z Sigma^* is Herglotz.
    const bool ok = z.imag() == 0.0 || v.imag() * z.imag() < 0.0;
    herglotz_all = herglotz_all && ok;
    writer.begin_row();
    writer.field(z.real());
    writer.field(z.imag());
    writer.field(v.real());
    writer.field(v.imag());
    writer.field(ok ? 1.0 : 0.0);
    writer.end_row();
  }
  write_file(run.out_dir, "report.csv", csv.str());

  json summary;
  summary["alpha"] = cfg.alpha;
  summary["L"] = cfg.box_length;
  summary["P"] = cfg.modes;
  summary["bound_state"] = energy;
  summary["bound_state_target"] = target;
  summary["bound_state_rel_error"] = std::abs(energy - target) / std::abs(target);
  summary["herglotz_sign_ok"] = herglotz_all;
  write_file(run.out_dir, "summary.json", summary.dump(2) + "\n");
  return 0;
}

int run_nelson(const kf::RunConfig& run) {
  if (!std::holds_alternative<kf::NelsonTruncConfig>(run.model))
    throw kf::config_error("nelson: --config with model \"nelson\" required");
  const auto cfg = std::get<kf::NelsonTruncConfig>(run.model);
  const auto result = kf::nelson_experiment(cfg, kf::resolve_jobs(run.jobs));

  std::ostringstream csv;
  result.report.write_csv(csv);
  write_file(run.out_dir, "report.csv", csv.str());

  json summary;
  summary["gamma_star"] = result.gamma_star;
  summary["gs_renormalized"] = result.gs_renormalized;
  summary["gs_unrenormalized"] = result.gs_unrenormalized;
  summary["renormalized_drift"] = result.renormalized_drift;
  summary["unrenormalized_drift"] = result.unrenormalized_drift;
  summary["drift_improved"] =
      result.renormalized_drift < result.unrenormalized_drift;
  for (std::size_t zi = 0; zi < result.report.z_points.size(); ++zi) {
    const double final_e = result.report.rows.back().e[zi];
    const double ablated = result.ablated_e_final[zi];
    summary["final_e"].push_back(final_e);
    summary["final_e_ablated"].push_back(ablated);
    summary["ablation_factor"].push_back(ablated / std::max(final_e, 1e-30));
    summary["d_strictly_decreasing"].push_back(
        result.report.d_strictly_decreasing(zi));
  }
  write_file(run.out_dir, "summary.json", summary.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krein-forge: singular perturbations by resolvent formulas"};
  app.require_subcommand(1);
  app.fallthrough();

  kf::RunConfig run;
  std::string config_path;
  std::vector<std::string> z_args;
  app.add_option("--config", config_path, "model configuration JSON");
  app.add_option("--seed", run.seed, "seed for random instances");
  app.add_option("--out", run.out_dir, "output directory");
  app.add_option("--tolerance", run.tolerance, "tolerance override");
  app.add_option("--jobs", run.jobs,
                 "parallel workers (env KREIN_FORGE_JOBS as fallback)");
  app.add_option("--z", z_args,
                 "evaluation points re,im for scan/delta1d reports");

  auto* check = app.add_subcommand("check", "run the identity battery");
  check->add_flag("--inject-defect", run.inject_defect,
                  "corrupt one instance (negative control)");
  auto* scan = app.add_subcommand("scan", "regular-approximation scan");
  auto* delta = app.add_subcommand("delta1d", "delta-well validation model");
  auto* nelson = app.add_subcommand("nelson", "truncated Fock-space experiment");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& arg : z_args) {
      const auto comma = arg.find(',');
      if (comma == std::string::npos)
        throw kf::config_error("--z expects re,im pairs");
      run.z_points.emplace_back(std::stod(arg.substr(0, comma)),
                                std::stod(arg.substr(comma + 1)));
    }
    if (!config_path.empty()) run.model = kf::load_model_config(config_path);
    if (check->parsed()) return run_check(run);
    if (scan->parsed()) return run_scan(run);
    if (delta->parsed()) return run_delta1d(run);
    if (nelson->parsed()) return run_nelson(run);
  } catch (const kf::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const kf::budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
