#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "kreinforge/charge_map.hpp"
#include "kreinforge/random.hpp"
#include "kreinforge/spectral_operator.hpp"

namespace kreinforge {

enum class ThetaKind { self_adjoint, symmetric_only, scalar };

// Extension parameter Theta acting on the auxiliary space.  Self-adjoint and
// scalar kinds are validated Hermitian at construction; symmetric_only is a
// bookkeeping flag used by the two-stage construction, where the parameter
// need not be self-adjoint on its own (the true block parameter always is).
struct ExtensionParameter {
  Matrix theta;
  ThetaKind kind = ThetaKind::self_adjoint;

  static ExtensionParameter self_adjoint(Matrix m);
  static ExtensionParameter symmetric(Matrix m);
  static ExtensionParameter scalar(double value, int n);

  int dim() const { return static_cast<int>(theta.rows()); }
};

// Decomposition psi = psi_0 + G phi of a vector relative to the reference
// charge field G = G_{lambda_0}.  psi_0 plays the regular part, phi the
// charge.
struct BoundaryDecomposition {
  Vector psi0;
  Vector phi;
};

// Single-stage machinery for the pair (H, Sigma): the charge fields
//   G_z = (Sigma R_{zbar})^*,        G = G_{lambda_0},
// the operator-valued function
//   M_z = Sigma (G - G_z),
// and the resolvent formula
//   K_Theta(z) = R_z + G_z (Theta + M_z)^{-1} G_{zbar}^*.
// z is admissible when Theta + M_z is invertible with condition number below
// tol.cond_limit.  (G_z, M_z) pairs are cached per z; the cache is guarded by
// a mutex so parallel z-scans can share one family.
class KreinFamily {
 public:
  KreinFamily(SpectralOperator h, ChargeMap sigma,
              std::optional<double> lambda0 = std::nullopt,
              Tolerances tol = Tolerances{});

  const SpectralOperator& op() const { return h_; }
  const ChargeMap& sigma() const { return sigma_; }
  double lambda0() const { return lambda0_; }
  const Tolerances& tolerances() const { return tol_; }
  int dim() const { return h_.dim(); }
  int target_dim() const { return sigma_.target_dim(); }

  Matrix gz(Complex z) const;
  Matrix weyl(Complex z) const;
  Matrix g0() const { return gz(Complex(lambda0_, 0.0)); }
  Matrix r0() const { return h_.resolvent(Complex(lambda0_, 0.0)); }

  // Membership test for the admissible set: Theta + M_z invertible.
  bool in_admissible_set(const ExtensionParameter& theta, Complex z) const;

  Matrix krein_resolvent(const ExtensionParameter& theta, Complex z) const;

  // Boundary evaluations on explicit decompositions psi = psi_0 + G phi.
  Vector boundary_value(const BoundaryDecomposition& d) const;   // psi
  Vector sigma0_of(const BoundaryDecomposition& d) const;        // Sigma psi_0
  Vector sigmastar_of(const BoundaryDecomposition& d) const;     // phi
  // S^x psi = H psi_0 + lambda_0 G phi, the extension of H off the regular
  // part.
  Vector sx_of(const BoundaryDecomposition& d) const;

  // Recovers (psi_0, phi) for psi with (-H_Theta + lambda_0) psi =
  // (-H + lambda_0) psi_0, i.e. psi_0 = (lambda_0 - zeta) R psi for an
  // eigenvector with eigenvalue zeta (and likewise for psi in ran(G_zeta)).
  // phi is the least-squares charge against the columns of G; throws
  // decomposition_ill_conditioned when that system has condition number
  // above 1e10.
  BoundaryDecomposition extract_charge(const Vector& psi, Complex zeta) const;

 private:
  struct CacheEntry {
    Matrix g;
    Matrix m;
  };
  const CacheEntry& cached(Complex z) const;

  SpectralOperator h_;
  ChargeMap sigma_;
  double lambda0_;
  Tolerances tol_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<double, double>, CacheEntry> cache_;
};

// Resolvent of the regular perturbation H + Sigma0^* Theta0^{-1} Sigma0:
//   R_z + (Sigma0 R_{zbar})^* (Theta0 - Sigma0 R_z Sigma0^*)^{-1} Sigma0 R_z.
// Throws singular_pivot when the middle factor is numerically singular.
Matrix konno_kuroda(const SpectralOperator& h, const ChargeMap& sigma0,
                    const ExtensionParameter& theta0, Complex z,
                    const Tolerances& tol = Tolerances{});

// Residual of the regular/singular equivalence: the regular-perturbation
// resolvent above coincides with K_Theta for Theta = Theta0 - Sigma0 R
// Sigma0^*, R = (-H + lambda_0)^{-1}.
double regular_equivalence(const SpectralOperator& h, const ChargeMap& sigma0,
                           const ExtensionParameter& theta0, Complex z,
                           std::optional<double> lambda0 = std::nullopt,
                           const Tolerances& tol = Tolerances{});

// Max residual of the abstract Green identity
//   <S^x psi, psi'> - <psi, S^x psi'> =
//       (SigmaStar psi, Sigma0 psi') - (Sigma0 psi, SigmaStar psi')
// over `samples` random decomposition pairs.
double green_identity_check(const KreinFamily& k, int samples, RandomEngine& rng);

struct AdditiveFormReport {
  double additive_residual;   // max ||H_Theta psi - (H psi + Sigma^* phi)||
  double boundary_residual;   // max ||Sigma psi_0 - Theta phi||
  double extraction_cond;     // worst least-squares condition number
};

// Verifies the additive representation H_Theta = H + Sigma^* SigmaStar on the
// eigenvectors of the reconstructed H_Theta, together with the boundary
// condition Sigma psi_0 = Theta phi.
AdditiveFormReport additive_form_check(const KreinFamily& k,
                                       const ExtensionParameter& theta,
                                       Complex z);

// rank(Sigma) == target_dim  <=>  ker(G_z) == {0}, decided by singular-value
// thresholds.
bool rank_kernel_equivalence(const KreinFamily& k, Complex z, double tol = 1e-10);

// Worst margin of the chain ||(Theta+M_z)phi||^2 >= |((Theta+M_z)phi,phi)|^2
// >= Im(z)^2 ||G_z phi||^4 over random unit charges; nonnegative when the
// bound holds.
double coercivity_margin(const KreinFamily& k, const ExtensionParameter& theta,
                         Complex z, int samples, RandomEngine& rng);

}  // namespace kreinforge
