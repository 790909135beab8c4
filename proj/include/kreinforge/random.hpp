#pragma once

#include <cstdint>
#include <random>

#include "kreinforge/types.hpp"

namespace kreinforge {

// Deterministic random source for test instances and CLI runs.  Gaussians
// come from an explicit Box-Muller transform on top of mt19937_64 so the
// stream is identical across standard libraries, which is what makes seeded
// CSV reports byte-stable.
class RandomEngine {
 public:
  explicit RandomEngine(std::uint64_t seed) : gen_(seed) {}

  double uniform();                 // [0, 1)
  double gaussian();                // standard normal
  Complex complex_gaussian();       // (g1 + i g2) / sqrt(2)

  Vector complex_vector(int n);
  Vector unit_vector(int n);
  Matrix complex_matrix(int rows, int cols);

  // Hermitian matrix rescaled to the requested spectral radius.
  Matrix hermitian(int n, double spectral_radius);

  // Gaussian Hermitian ensemble member with eigenvalues affinely mapped into
  // [lo, hi]; used for semibounded instances.
  Matrix hermitian_in_band(int n, double lo, double hi);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kreinforge
