#include "kreinforge/models/nelson.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "kreinforge/linalg.hpp"

namespace kreinforge {

namespace {

double omega(double kappa) { return std::sqrt(kappa * kappa + 1.0); }

// Unitary-convention form factor of (-Delta + 1)^{-1/4} delta in one
// dimension.
double form_factor(double kappa) {
  return std::pow(2.0 * M_PI, -0.5) * std::pow(1.0 + kappa * kappa, -0.25);
}

std::size_t multiset_count(int modes, int bosons) {
  // C(modes + bosons - 1, bosons)
  std::size_t num = 1;
  for (int i = 1; i <= bosons; ++i)
    num = num * static_cast<std::size_t>(modes - 1 + i) / static_cast<std::size_t>(i);
  return num;
}

void enumerate_occupations(int modes, int budget, int mode, std::vector<int>& occ,
                           std::vector<std::vector<int>>& out) {
  if (mode == modes) {
    out.push_back(occ);
    return;
  }
  for (int n = 0; n <= budget; ++n) {
    occ[mode] = n;
    enumerate_occupations(modes, budget - n, mode + 1, occ, out);
  }
  occ[mode] = 0;
}

// One-particle spectral Laplacian on the periodic grid of unit momentum
// spacing: x_j = 2 pi j / P, integer momenta in FFT ordering.
Matrix grid_kinetic(int p) {
  Matrix kin = Matrix::Zero(p, p);
  for (int m = 0; m < p; ++m) {
    const int momentum = (m <= (p - 1) / 2) ? m : m - p;
    const double energy = static_cast<double>(momentum) * momentum;
    for (int j = 0; j < p; ++j)
      for (int jp = 0; jp < p; ++jp) {
        const double phase = 2.0 * M_PI * momentum * (j - jp) / p;
        kin(j, jp) += energy / p * Complex(std::cos(phase), std::sin(phase));
      }
  }
  return kin;
}

struct Quadrature {
  double value = 0.0;
};

double gk15(double a, double b, const std::function<double(double)>& f,
            double* gauss_out) {
  static const double xk[8] = {0.0,
                               0.2077849550078985,
                               0.4058451513773972,
                               0.5860872354676911,
                               0.7415311855993944,
                               0.8648644233597691,
                               0.9491079123427585,
                               0.9914553711208126};
  static const double wk[8] = {0.2094821410847278, 0.2044329400752989,
                               0.1903505780647854, 0.1690047266392679,
                               0.1406532597155259, 0.1047900103222502,
                               0.0630920926299786, 0.0229353220105292};
  static const double wg[4] = {0.4179591836734694, 0.3818300505051189,
                               0.2797053914892767, 0.1294849661688697};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = wk[0] * f(c);
  double gauss = wg[0] * f(c);
  for (int i = 1; i < 8; ++i) {
    const double lo = f(c - h * xk[i]);
    const double hi = f(c + h * xk[i]);
    kron += wk[i] * (lo + hi);
    if (i % 2 == 0) gauss += wg[i / 2] * (lo + hi);
  }
  if (gauss_out) *gauss_out = gauss * h;
  return kron * h;
}

void adaptive_gk(double a, double b, const std::function<double(double)>& f,
                 double rel_tol, int depth, Quadrature& acc) {
  double gauss = 0.0;
  const double kron = gk15(a, b, f, &gauss);
  if (depth > 40 || std::abs(kron - gauss) <=
                        rel_tol * std::max(std::abs(kron), 1e-300)) {
    acc.value += kron;
    return;
  }
  const double mid = 0.5 * (a + b);
  adaptive_gk(a, mid, f, rel_tol, depth + 1, acc);
  adaptive_gk(mid, b, f, rel_tol, depth + 1, acc);
}

double integrate(double a, double b, const std::function<double(double)>& f,
                 double rel_tol) {
  if (b <= a) return 0.0;
  Quadrature acc;
  // Split at decade boundaries so the logarithmic tail is resolved cheaply.
  double left = a;
  double right = std::min(b, 1.0);
  while (left < b) {
    adaptive_gk(left, right, f, rel_tol, 0, acc);
    left = right;
    right = std::min(b, right * 10.0);
    if (right <= left) right = b;
  }
  return acc.value;
}

}  // namespace

void NelsonTruncConfig::validate() const {
  if (boson_modes < 1) throw config_error("nelson: K must be >= 1");
  if (max_bosons < 1) throw config_error("nelson: B must be >= 1");
  if (grid_points < 1) throw config_error("nelson: P must be >= 1");
  if (particles < 1) throw config_error("nelson: N must be >= 1");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1]))
      throw config_error("nelson: schedule must be strictly increasing");
  if (fock_dimension() > budget)
    throw budget_exceeded("nelson: Fock dimension " +
                          std::to_string(fock_dimension()) +
                          " exceeds budget " + std::to_string(budget));
}

std::size_t NelsonTruncConfig::fock_dimension() const {
  std::size_t particle = 1;
  for (int a = 0; a < particles; ++a) {
    particle *= static_cast<std::size_t>(grid_points);
    if (particle > 10 * budget) return particle;  // already hopeless
  }
  std::size_t boson = 0;
  for (int b = 0; b <= max_bosons; ++b) boson += multiset_count(boson_modes, b);
  return particle * boson;
}

NelsonSystem nelson_build(const NelsonTruncConfig& cfg) {
  cfg.validate();

  FockBasis basis;
  const int k = cfg.boson_modes;
  basis.mode_momenta.resize(k);
  for (int m = 0; m < k; ++m)
    basis.mode_momenta[m] = static_cast<double>(m - k / 2);
  {
    std::vector<int> occ(k, 0);
    enumerate_occupations(k, cfg.max_bosons, 0, occ, basis.occupations);
  }
  std::stable_sort(basis.occupations.begin(), basis.occupations.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int sa = 0, sb = 0;
                     for (int x : a) sa += x;
                     for (int x : b) sb += x;
                     return sa < sb;
                   });
  basis.total_number.reserve(basis.occupations.size());
  for (const auto& occ : basis.occupations) {
    int total = 0;
    for (int x : occ) total += x;
    basis.total_number.push_back(total);
  }
  std::map<std::vector<int>, std::size_t> occ_index;
  for (std::size_t i = 0; i < basis.occupations.size(); ++i)
    occ_index[basis.occupations[i]] = i;

  const int p = cfg.grid_points;
  int particle_configs = 1;
  for (int a = 0; a < cfg.particles; ++a) particle_configs *= p;
  basis.particle_configs = particle_configs;

  const std::size_t nb = basis.occupations.size();
  const std::size_t dim = basis.dim();

  // Kinetic part: sum of the one-particle grid Laplacian over the particle
  // axes, block-diagonal over boson occupations.
  const Matrix kin1 = grid_kinetic(p);
  Matrix h = Matrix::Zero(dim, dim);
  for (int cfg_a = 0; cfg_a < particle_configs; ++cfg_a) {
    for (int axis = 0; axis < cfg.particles; ++axis) {
      int stride = 1;
      for (int a = 0; a < axis; ++a) stride *= p;
      const int ja = (cfg_a / stride) % p;
      for (int jb = 0; jb < p; ++jb) {
        const int cfg_b = cfg_a + (jb - ja) * stride;
        for (std::size_t o = 0; o < nb; ++o)
          h(basis.index(cfg_a, o), basis.index(cfg_b, o)) += kin1(ja, jb);
      }
    }
  }
  // Field energy dGamma(omega), diagonal in the occupation basis.
  for (int cfg_a = 0; cfg_a < particle_configs; ++cfg_a)
    for (std::size_t o = 0; o < nb; ++o) {
      double energy = 0.0;
      for (int m = 0; m < k; ++m)
        energy += basis.occupations[o][m] * omega(basis.mode_momenta[m]);
      h(basis.index(cfg_a, o), basis.index(cfg_a, o)) += energy;
    }

  SpectralOperator h_free = SpectralOperator::from_hermitian(h);

  // Annihilator: (A Psi)(x) = a(v_x) Psi(x), pointwise in the particle
  // configuration, with the symmetric-Fock sqrt(occ) factors.
  Matrix a_mat = Matrix::Zero(dim, dim);
  for (int cfg_a = 0; cfg_a < particle_configs; ++cfg_a) {
    // Sum of plane-wave phases over the particle coordinates.
    std::vector<Complex> phases(k);
    for (int m = 0; m < k; ++m) {
      Complex total(0.0, 0.0);
      int rest = cfg_a;
      for (int axis = 0; axis < cfg.particles; ++axis) {
        const int j = rest % p;
        rest /= p;
        const double x = 2.0 * M_PI * j / p;
        const double arg = basis.mode_momenta[m] * x;
        total += Complex(std::cos(arg), std::sin(arg));
      }
      phases[m] = total;
    }
    for (std::size_t o = 0; o < nb; ++o) {
      const auto& occ = basis.occupations[o];
      for (int m = 0; m < k; ++m) {
        if (occ[m] == 0) continue;
        std::vector<int> lowered = occ;
        lowered[m] -= 1;
        const std::size_t target = occ_index.at(lowered);
        a_mat(basis.index(cfg_a, target), basis.index(cfg_a, o)) +=
            cfg.coupling * form_factor(basis.mode_momenta[m]) * phases[m] *
            std::sqrt(static_cast<double>(occ[m]));
      }
    }
  }
  ChargeMap annihilator(std::move(a_mat));
  const double lambda0 = contractive_lambda0(h_free, annihilator);
  return NelsonSystem{cfg, std::move(basis), std::move(h_free),
                      std::move(annihilator), lambda0};
}

ChargeMap nelson_cutoff_charge(const NelsonSystem& system, double radius) {
  const FockBasis& basis = system.basis;
  const int k = system.config.boson_modes;
  const std::size_t nb = basis.occupations.size();
  Matrix cut = system.annihilator.matrix();
  // Zero the matrix elements that annihilate a mode beyond the cutoff.
  std::map<std::vector<int>, std::size_t> occ_index;
  for (std::size_t i = 0; i < nb; ++i) occ_index[basis.occupations[i]] = i;
  for (int cfg_a = 0; cfg_a < basis.particle_configs; ++cfg_a)
    for (std::size_t o = 0; o < nb; ++o) {
      const auto& occ = basis.occupations[o];
      for (int m = 0; m < k; ++m) {
        if (occ[m] == 0 || std::abs(basis.mode_momenta[m]) <= radius) continue;
        std::vector<int> lowered = occ;
        lowered[m] -= 1;
        cut(basis.index(cfg_a, occ_index.at(lowered)), basis.index(cfg_a, o)) = 0.0;
      }
    }
  return ChargeMap(std::move(cut));
}

double nelson_counterterm(double n_radius, double g, int particles) {
  if (n_radius <= 0.0) return 0.0;
  auto integrand = [](double r) {
    return r * r / std::sqrt(r * r + 1.0) / (r * r + std::sqrt(r * r + 1.0));
  };
  const double radial = integrate(0.0, n_radius, integrand, 1e-12);
  return g * g * particles * 4.0 * M_PI * std::pow(2.0 * M_PI, -3.0) * radial;
}

double nelson_discrete_counterterm(const NelsonSystem& system, double radius) {
  const ChargeMap a_n = nelson_cutoff_charge(system, radius);
  const std::size_t dim = system.basis.dim();
  Vector vacuum = Vector::Zero(dim);
  vacuum(system.basis.index(0, 0)) = 1.0;  // occupations[0] is the vacuum
  const Vector created = a_n.adjoint() * vacuum;
  const Matrix pseudo = system.h_free.apply([](double lambda) {
    return std::abs(lambda) > 1e-9 ? Complex(1.0 / lambda, 0.0)
                                   : Complex(0.0, 0.0);
  });
  return std::real(created.dot(pseudo * created));
}

NelsonExperimentResult nelson_experiment(const NelsonTruncConfig& cfg, int jobs) {
  if (cfg.schedule.size() < 4)
    throw config_error("nelson_experiment: schedule needs at least 4 indices");
  const NelsonSystem system = nelson_build(cfg);
  const std::size_t dim = system.basis.dim();
  const Matrix id = Matrix::Identity(dim, dim);

  std::vector<CutoffStage> stages;
  stages.reserve(cfg.schedule.size());
  for (double n : cfg.schedule) {
    const double e_n = nelson_discrete_counterterm(system, n);
    stages.push_back(CutoffStage{n, nelson_cutoff_charge(system, n), e_n * id});
  }
  CutoffFamily family(system.h_free, system.annihilator, system.lambda0,
                      std::move(stages));

  Matrix t_top = family.derived_parameter(family.size() - 1);
  t_top = 0.5 * (t_top + t_top.adjoint().eval());
  TwofoldSystem base(system.h_free, system.annihilator,
                     ExtensionParameter::symmetric(t_top), 0.5, system.lambda0);

  NelsonExperimentResult result;
  result.gamma_star = base.neumann_gamma_search().gamma_star;

  // Ground-state tables; also locate a real evaluation point below every
  // spectrum in play, including the two-stage targets.
  double floor = std::min(system.lambda0, system.h_free.min_eigenvalue());
  {
    const Matrix hat0 = base.hat_h0();
    Eigen::SelfAdjointEigenSolver<Matrix> es0(hat0);
    Eigen::SelfAdjointEigenSolver<Matrix> esT(hat0 + t_top);
    floor = std::min({floor, es0.eigenvalues().minCoeff(),
                      esT.eigenvalues().minCoeff()});
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto [h_n, h_sub] = family.approx_hamiltonians(i);
    const Matrix corrected = h_n + family.stage(i).counterterm;
    Eigen::SelfAdjointEigenSolver<Matrix> es_corr(corrected);
    Eigen::SelfAdjointEigenSolver<Matrix> es_raw(h_n);
    Eigen::SelfAdjointEigenSolver<Matrix> es_sub(h_sub);
    result.gs_renormalized.push_back(es_corr.eigenvalues().minCoeff());
    result.gs_unrenormalized.push_back(es_raw.eigenvalues().minCoeff());
    floor = std::min({floor, es_corr.eigenvalues().minCoeff(),
                      es_raw.eigenvalues().minCoeff(),
                      es_sub.eigenvalues().minCoeff()});
  }

  const std::vector<Complex> zs = {Complex(0.0, result.gamma_star),
                                   Complex(0.0, -result.gamma_star),
                                   Complex(floor - 1.0, 0.0)};
  CutoffDriverOptions options;
  options.jobs = jobs;
  result.report = cutoff_convergence_driver(base, family, zs, options);

  CutoffDriverOptions ablated = options;
  ablated.ablate_counterterm = true;
  const ConvergenceReport ablated_report =
      cutoff_convergence_driver(base, family, zs, ablated);
  result.ablated_e_final = ablated_report.rows.back().e;

  const std::size_t last = family.size() - 1;
  result.renormalized_drift =
      std::abs(result.gs_renormalized[last] - result.gs_renormalized[last - 1]);
  result.unrenormalized_drift = std::abs(result.gs_unrenormalized[last] -
                                         result.gs_unrenormalized[last - 1]);
  return result;
}

}  // namespace kreinforge
