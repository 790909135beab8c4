#pragma once

#include <utility>

#include "kreinforge/charge_map.hpp"
#include "kreinforge/spectral_operator.hpp"

namespace kreinforge {

// Validation instance: the free line Hamiltonian truncated to a periodic box
// with a point charge at the origin.  The charge map is point evaluation, so
// the regular-perturbation machinery realizes the attractive delta well with
// its known bound state.
struct Delta1DConfig {
  double box_length = 40.0;  // L >= 10
  int modes = 1024;          // P >= 64, even
  double alpha = 2.0;        // coupling of the delta potential

  void validate() const;
};

// H = Fourier-truncated -d^2/dx^2 on the periodic box: eigenvalues
// (2 pi k / L)^2 for k = -P/2 .. P/2-1, diagonal in the plane-wave basis.
// Sigma = evaluation at x = 0, the row of plane-wave values 1/sqrt(L).
std::pair<SpectralOperator, ChargeMap> delta1d_build(const Delta1DConfig& cfg);

// Sigma R_z Sigma^* as a scalar; the finite-box analogue of the free-line
// kernel at coincident points.
Complex point_interaction_kernel(const SpectralOperator& h, const ChargeMap& sigma,
                                 Complex z);

// Bound-state energy of H + Sigma^* Theta0^{-1} Sigma with the scalar
// parameter Theta0 = -1/alpha: the real pole below zero of the
// regular-perturbation resolvent, located by bisection on the rank-one
// eigenvalue equation of the assembled operator.  Throws no_bound_state for
// nonattractive couplings.
double delta1d_bound_state(const Delta1DConfig& cfg);

}  // namespace kreinforge
