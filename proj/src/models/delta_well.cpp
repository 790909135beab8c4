#include "kreinforge/models/delta_well.hpp"

#include <cmath>

namespace kreinforge {

void Delta1DConfig::validate() const {
  if (box_length < 10.0) throw config_error("delta1d: L must be >= 10");
  if (modes < 64 || modes % 2 != 0)
    throw config_error("delta1d: P must be even and >= 64");
}

std::pair<SpectralOperator, ChargeMap> delta1d_build(const Delta1DConfig& cfg) {
  cfg.validate();
  const int p = cfg.modes;
  RealVector eigenvalues(p);
  for (int i = 0; i < p; ++i) {
    const int k = i - p / 2;
    const double wavenumber = 2.0 * M_PI * k / cfg.box_length;
    eigenvalues(i) = wavenumber * wavenumber;
  }
  Matrix sigma(1, p);
  sigma.setConstant(Complex(1.0 / std::sqrt(cfg.box_length), 0.0));
  return {SpectralOperator::diagonal(std::move(eigenvalues)),
          ChargeMap(std::move(sigma))};
}

Complex point_interaction_kernel(const SpectralOperator& h, const ChargeMap& sigma,
                                 Complex z) {
  if (h.distance_to_spectrum(z) < 1e-14)
    throw spectrum_hit("point_interaction_kernel: z on the spectrum");
  // Sigma R_z Sigma^* through the spectral sum; no dense resolvent needed.
  const Matrix in_basis = h.eigenbasis().isIdentity(0.0)
                              ? sigma.matrix()
                              : Matrix(sigma.matrix() * h.eigenbasis());
  Complex acc(0.0, 0.0);
  for (int k = 0; k < h.dim(); ++k)
    acc += std::norm(in_basis(0, k)) / (z - h.eigenvalues()(k));
  return acc;
}

double delta1d_bound_state(const Delta1DConfig& cfg) {
  cfg.validate();
  if (cfg.alpha <= 0.0)
    throw no_bound_state("delta1d_bound_state: coupling is not attractive");
  auto [h, sigma] = delta1d_build(cfg);

  // The perturbation Sigma^* Theta0^{-1} Sigma = -alpha u u^* is rank one, so
  // the eigenvalue E < 0 of the assembled operator solves
  //   sum_k |u_k|^2 / (lambda_k - E) = 1/alpha,
  // the pole condition of the regular-perturbation resolvent.  The left side
  // increases in E on (-inf, 0) and blows up at the lowest eigenvalue, hence
  // a unique root found by bisection.
  const RealVector& lambda = h.eigenvalues();
  const double weight = 1.0 / cfg.box_length;  // |u_k|^2 for every mode
  auto mass = [&](double e) {
    double acc = 0.0;
    for (int i = 0; i < lambda.size(); ++i) acc += weight / (lambda(i) - e);
    return acc;
  };
  const double target = 1.0 / cfg.alpha;
  double hi = -1e-12;
  double lo = -std::max(cfg.alpha * cfg.alpha,
                        2.0 * cfg.alpha * cfg.modes / cfg.box_length) - 1.0;
  if (mass(lo) >= target)
    throw no_bound_state("delta1d_bound_state: bracket failure");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double energy = 0.5 * (lo + hi);
  if (!(energy < 0.0))
    throw no_bound_state("delta1d_bound_state: no negative eigenvalue found");
  return energy;
}

}  // namespace kreinforge
