#include "kreinforge/krein.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "kreinforge/linalg.hpp"

namespace kreinforge {

ExtensionParameter ExtensionParameter::self_adjoint(Matrix m) {
  if (m.rows() != m.cols())
    throw dimension_mismatch("ExtensionParameter: square matrix required");
  if (hermiticity_defect(m) > 1e-12)
    throw dimension_mismatch("ExtensionParameter: not Hermitian to 1e-12");
  return ExtensionParameter{std::move(m), ThetaKind::self_adjoint};
}

ExtensionParameter ExtensionParameter::symmetric(Matrix m) {
  if (m.rows() != m.cols())
    throw dimension_mismatch("ExtensionParameter: square matrix required");
  if (hermiticity_defect(m) > 1e-12)
    throw dimension_mismatch("ExtensionParameter: not symmetric to 1e-12");
  return ExtensionParameter{std::move(m), ThetaKind::symmetric_only};
}

ExtensionParameter ExtensionParameter::scalar(double value, int n) {
  return ExtensionParameter{value * Matrix::Identity(n, n), ThetaKind::scalar};
}

KreinFamily::KreinFamily(SpectralOperator h, ChargeMap sigma,
                         std::optional<double> lambda0, Tolerances tol)
    : h_(std::move(h)), sigma_(std::move(sigma)), tol_(tol) {
  if (sigma_.dim() != h_.dim())
    throw dimension_mismatch("KreinFamily: charge map does not act on H's space");
  lambda0_ = lambda0.value_or(h_.default_lambda0());
  if (h_.distance_to_spectrum(Complex(lambda0_, 0.0)) < 1e-12)
    throw spectrum_hit("KreinFamily: lambda0 lies on the spectrum");
}

const KreinFamily::CacheEntry& KreinFamily::cached(Complex z) const {
  const auto key = std::make_pair(z.real(), z.imag());
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  // G_z = (Sigma R_{zbar})^*; M_z = Sigma (G - G_z).
  Matrix g = (sigma_.matrix() * h_.resolvent(std::conj(z))).adjoint();
  Matrix m;
  if (z == Complex(lambda0_, 0.0)) {
    m = Matrix::Zero(target_dim(), target_dim());
  } else {
    m = sigma_.matrix() * (cached(Complex(lambda0_, 0.0)).g - g);
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(key, CacheEntry{std::move(g), std::move(m)});
  (void)inserted;
  return it->second;
}

Matrix KreinFamily::gz(Complex z) const { return cached(z).g; }

Matrix KreinFamily::weyl(Complex z) const { return cached(z).m; }

bool KreinFamily::in_admissible_set(const ExtensionParameter& theta,
                                    Complex z) const {
  if (h_.distance_to_spectrum(z) < 1e-14) return false;
  const Matrix pivot = theta.theta + weyl(z);
  return condition_number(pivot) < tol_.cond_limit;
}

Matrix KreinFamily::krein_resolvent(const ExtensionParameter& theta,
                                    Complex z) const {
  if (theta.dim() != target_dim())
    throw dimension_mismatch("krein_resolvent: parameter dimension mismatch");
  const CacheEntry& c = cached(z);
  const Matrix pivot = theta.theta + c.m;
  const Matrix inv = inverse_checked<not_in_z>(pivot, tol_.cond_limit,
                                               "krein_resolvent pivot");
  const Matrix g_bar = gz(std::conj(z));
  return h_.resolvent(z) + c.g * inv * g_bar.adjoint();
}

Vector KreinFamily::boundary_value(const BoundaryDecomposition& d) const {
  return d.psi0 + g0() * d.phi;
}

Vector KreinFamily::sigma0_of(const BoundaryDecomposition& d) const {
  return sigma_.matrix() * d.psi0;
}

Vector KreinFamily::sigmastar_of(const BoundaryDecomposition& d) const {
  return d.phi;
}

Vector KreinFamily::sx_of(const BoundaryDecomposition& d) const {
  return h_.matrix() * d.psi0 + lambda0_ * (g0() * d.phi);
}

BoundaryDecomposition KreinFamily::extract_charge(const Vector& psi,
                                                  Complex zeta) const {
  const Complex l0(lambda0_, 0.0);
  Vector psi0 = (l0 - zeta) * (r0() * psi);
  double cond = 0.0;
  Vector phi = least_squares(g0(), psi - psi0, &cond);
  if (!(cond < 1e10))
    throw decomposition_ill_conditioned(
        "extract_charge: charge system condition number " + std::to_string(cond));
  return BoundaryDecomposition{std::move(psi0), std::move(phi)};
}

Matrix konno_kuroda(const SpectralOperator& h, const ChargeMap& sigma0,
                    const ExtensionParameter& theta0, Complex z,
                    const Tolerances& tol) {
  if (sigma0.dim() != h.dim())
    throw dimension_mismatch("konno_kuroda: charge map dimension mismatch");
  if (theta0.dim() != sigma0.target_dim())
    throw dimension_mismatch("konno_kuroda: parameter dimension mismatch");
  const Matrix rz = h.resolvent(z);
  const Matrix sig_rz = sigma0.matrix() * rz;
  const Matrix sig_rzbar = sigma0.matrix() * h.resolvent(std::conj(z));
  const Matrix pivot = theta0.theta - sig_rz * sigma0.adjoint();
  const Matrix inv = inverse_checked<singular_pivot>(pivot, tol.cond_limit,
                                                     "konno_kuroda pivot");
  return rz + sig_rzbar.adjoint() * inv * sig_rz;
}

double regular_equivalence(const SpectralOperator& h, const ChargeMap& sigma0,
                           const ExtensionParameter& theta0, Complex z,
                           std::optional<double> lambda0,
                           const Tolerances& tol) {
  KreinFamily family(h, sigma0, lambda0, tol);
  const Matrix r = family.r0();
  const Matrix theta =
      theta0.theta - sigma0.matrix() * r * sigma0.adjoint();
  const Matrix singular = family.krein_resolvent(
      ExtensionParameter{theta, ThetaKind::self_adjoint}, z);
  const Matrix regular = konno_kuroda(h, sigma0, theta0, z, tol);
  return operator_norm(regular - singular);
}

double green_identity_check(const KreinFamily& k, int samples,
                            RandomEngine& rng) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    BoundaryDecomposition a{rng.complex_vector(k.dim()),
                            rng.complex_vector(k.target_dim())};
    BoundaryDecomposition b{rng.complex_vector(k.dim()),
                            rng.complex_vector(k.target_dim())};
    const Vector psi = k.boundary_value(a);
    const Vector chi = k.boundary_value(b);
    const Complex lhs = k.sx_of(a).dot(chi) - psi.dot(k.sx_of(b));
    const Complex rhs =
        k.sigmastar_of(a).dot(k.sigma0_of(b)) - k.sigma0_of(a).dot(k.sigmastar_of(b));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

AdditiveFormReport additive_form_check(const KreinFamily& k,
                                       const ExtensionParameter& theta,
                                       Complex z) {
  const Matrix resolvent = k.krein_resolvent(theta, z);
  const Matrix h_theta =
      z * Matrix::Identity(k.dim(), k.dim()) -
      inverse_checked<not_in_z>(resolvent, k.tolerances().cond_limit,
                                "additive_form_check: resolvent inverse");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h_theta + h_theta.adjoint()));

  const Matrix h = k.op().matrix();
  const Matrix sigma_adj = k.sigma().adjoint();
  AdditiveFormReport report{0.0, 0.0, 0.0};
  for (int j = 0; j < k.dim(); ++j) {
    const Vector psi = es.eigenvectors().col(j);
    const double e = es.eigenvalues()(j);
    const BoundaryDecomposition d = k.extract_charge(psi, Complex(e, 0.0));
    double cond = 0.0;
    least_squares(k.g0(), psi - d.psi0, &cond);
    report.extraction_cond = std::max(report.extraction_cond, cond);
    const Vector additive = h * psi + sigma_adj * d.phi;
    report.additive_residual =
        std::max(report.additive_residual, (h_theta * psi - additive).norm());
    const Vector boundary = k.sigma().matrix() * d.psi0 - theta.theta * d.phi;
    report.boundary_residual = std::max(report.boundary_residual, boundary.norm());
  }
  return report;
}

bool rank_kernel_equivalence(const KreinFamily& k, Complex z, double tol) {
  Eigen::JacobiSVD<Matrix> sigma_svd(k.sigma().matrix());
  const auto& ssv = sigma_svd.singularValues();
  const bool full_rank = ssv(ssv.size() - 1) > tol * std::max(1.0, ssv(0));
  Eigen::JacobiSVD<Matrix> g_svd(k.gz(z));
  const auto& gsv = g_svd.singularValues();
  const bool trivial_kernel = gsv(gsv.size() - 1) > tol * std::max(1.0, gsv(0));
  return full_rank == trivial_kernel;
}

double coercivity_margin(const KreinFamily& k, const ExtensionParameter& theta,
                         Complex z, int samples, RandomEngine& rng) {
  const Matrix pivot = theta.theta + k.weyl(z);
  const Matrix g = k.gz(z);
  const double im2 = z.imag() * z.imag();
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vector phi = rng.unit_vector(k.target_dim());
    const Vector tp = pivot * phi;
    const double lhs = tp.squaredNorm();
    const double mid = std::norm(phi.dot(tp));
    const double g4 = std::pow((g * phi).squaredNorm(), 2);
    margin = std::min(margin, std::min(lhs - mid, mid - im2 * g4));
  }
  return margin;
}

}  // namespace kreinforge
