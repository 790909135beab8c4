#pragma once

#include <cstddef>
#include <vector>

#include "kreinforge/renorm.hpp"

namespace kreinforge {

// Truncated Fock-space instance of the abstract construction: N particles on
// a periodic grid tensored with bosons on a momentum mode grid, capped at B
// bosons in total.  The desk-scale experiment keeps one spatial dimension;
// the counterterm integral below stays in three dimensions where it is a
// cheap radial quadrature.
struct NelsonTruncConfig {
  int boson_modes = 8;       // K: momentum modes per axis
  int max_bosons = 1;        // B
  int grid_points = 2;       // P: particle grid points per axis
  int particles = 1;         // N
  double coupling = 0.5;     // g
  std::vector<double> schedule;  // mode-radius cutoffs, increasing
  std::size_t budget = 5000;     // cap on the total Fock dimension

  void validate() const;
  std::size_t fock_dimension() const;
};

// Occupation-number bookkeeping for the boson sectors b = 0, .., B over K
// modes.
struct FockBasis {
  std::vector<double> mode_momenta;            // kappa_m
  std::vector<std::vector<int>> occupations;   // all occ vectors, sum <= B
  std::vector<int> total_number;               // sum of each occupation
  int particle_configs = 0;                    // P^N

  std::size_t dim() const { return occupations.size() * particle_configs; }
  std::size_t index(int particle_cfg, std::size_t occ_idx) const {
    return static_cast<std::size_t>(particle_cfg) * occupations.size() + occ_idx;
  }
};

struct NelsonSystem {
  NelsonTruncConfig config;
  FockBasis basis;
  SpectralOperator h_free;   // kinetic x 1 + 1 x dGamma(omega), omega = sqrt(kappa^2+1)
  ChargeMap annihilator;     // A, lowers the boson number by one
  double lambda0 = 0.0;      // contractive reference point below the spectrum
};

NelsonSystem nelson_build(const NelsonTruncConfig& cfg);

// Cutoff charge A_n: the annihilator with the form factor restricted to
// modes |kappa| <= n.
ChargeMap nelson_cutoff_charge(const NelsonSystem& system, double radius);

// Continuum counterterm: the radial integral
//   E_n = g^2 N (2 pi)^{-3} 4 pi int_0^n r^2 (r^2+1)^{-1/2} /
//         (r^2 + sqrt(r^2+1)) dr,
// evaluated by adaptive quadrature to 1e-10 relative accuracy.  Its slope
// against ln n tends to g^2 N / (2 pi^2).
double nelson_counterterm(double n_radius, double g, int particles);

// Model-consistent counterterm on the mode grid: the vacuum-sector
// expectation of A_n H_free^+ A_n^* (pseudo-inverse on the orthogonal
// complement of the kernel), a finite sum over modes with radius <= n.
double nelson_discrete_counterterm(const NelsonSystem& system, double radius);

struct NelsonExperimentResult {
  ConvergenceReport report;          // counterterm-corrected run
  std::vector<double> ablated_e_final;  // final e_n per z with E_n zeroed
  std::vector<double> gs_renormalized;  // ground state of H_n + E_n per index
  std::vector<double> gs_unrenormalized;  // ground state of H_n per index
  double renormalized_drift = 0.0;   // across the top two cutoffs
  double unrenormalized_drift = 0.0;
  double gamma_star = 0.0;
};

// Runs the cutoff scheme with the discrete counterterm against the two-stage
// targets built from the converged parameter, and tabulates ground-state
// energies with and without the counterterm.
NelsonExperimentResult nelson_experiment(const NelsonTruncConfig& cfg,
                                         int jobs = 1);

}  // namespace kreinforge
