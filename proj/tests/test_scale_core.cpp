#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kreinforge/linalg.hpp"
#include "kreinforge/random.hpp"
#include "kreinforge/spectral_operator.hpp"

using namespace kreinforge;

namespace {

// Independent dense route: solve (-H + z) X = I by LU on the assembled
// matrix, never through the spectral form.
Matrix lu_resolvent_oracle(const Matrix& h, Complex z) {
  Matrix shifted = -h;
  shifted.diagonal().array() += z;
  return shifted.partialPivLu().solve(Matrix::Identity(h.rows(), h.cols()));
}

// Independent weighting route for the scale norm: form the weighted matrix
// entrywise in the eigenbasis and take the largest singular value.
double svd_scale_norm_oracle(const Matrix& op, const SpectralOperator& src,
                             double s, const SpectralOperator* tgt, double t) {
  Matrix weighted = op * src.weight(-s);
  if (tgt) weighted = tgt->weight(t) * weighted;
  Eigen::JacobiSVD<Matrix> svd(weighted);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("resolvent closed forms on diagonal operators") {
  RealVector ev(2);
  ev << 1.0, 2.0;
  SpectralOperator h = SpectralOperator::diagonal(ev);
  const Complex z(0.0, 1.0);
  const Matrix r = h.resolvent(z);
  CHECK(std::abs(r(0, 0) - 1.0 / (z - 1.0)) < 1e-15);
  CHECK(std::abs(r(1, 1) - 1.0 / (z - 2.0)) < 1e-15);
  CHECK(std::abs(r(0, 1)) == 0.0);

  RealVector single(1);
  single << 0.0;
  SpectralOperator h0 = SpectralOperator::diagonal(single);
  const Matrix r0 = h0.resolvent(z);
  CHECK(std::abs(r0(0, 0) - 1.0 / z) < 1e-16);
  CHECK(operator_norm(r0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("resolvent matches the dense LU oracle") {
  RandomEngine rng(11);
  const Matrix hm = rng.hermitian(6, 8.0);
  SpectralOperator h = SpectralOperator::from_hermitian(hm);
  const Complex z(2.0, 3.0);
  const Matrix expected = lu_resolvent_oracle(hm, z);
  CHECK(operator_norm(h.resolvent(z) - expected) < 1e-12);
  // (-H + z) R_z = 1
  Matrix shifted = -hm;
  shifted.diagonal().array() += z;
  CHECK(operator_norm(shifted * h.resolvent(z) - Matrix::Identity(6, 6)) < 1e-12);
}

TEST_CASE("resolvent refuses z on the spectrum") {
  RealVector ev(3);
  ev << -1.0, 0.5, 2.0;
  SpectralOperator h = SpectralOperator::diagonal(ev);
  CHECK_THROWS_AS(h.resolvent(Complex(0.5, 0.0)), spectrum_hit);
  CHECK_THROWS_AS(h.resolvent(Complex(0.5, 5e-15)), spectrum_hit);
}

TEST_CASE("constructor validates the eigenbasis") {
  RealVector ev(2);
  ev << 1.0, 2.0;
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(SpectralOperator(ev, bad), dimension_mismatch);
}

TEST_CASE("scale norm of the identity is one") {
  RandomEngine rng(3);
  SpectralOperator h = SpectralOperator::from_hermitian(rng.hermitian(5, 4.0));
  CHECK(scale_norm(Matrix::Identity(5, 5), h, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("resolvent decay in the scale norm: ||R_{ig}|| from plain to index r") {
  RealVector ev(10);
  for (int i = 0; i < 10; ++i) ev(i) = i + 1.0;
  SpectralOperator h = SpectralOperator::diagonal(ev);
  for (double gamma : {5.0, 50.0, 500.0}) {
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
      const double value =
          scale_norm(h.resolvent(Complex(0.0, gamma)), h, 0.0, r, &h);
      CHECK(value <= std::pow(gamma, -(1.0 - r)) + 1e-13);
    }
  }
}

TEST_CASE("scale norm matches the SVD oracle on random data") {
  RandomEngine rng(17);
  SpectralOperator src = SpectralOperator::from_hermitian(rng.hermitian(7, 6.0));
  SpectralOperator tgt = SpectralOperator::from_hermitian(rng.hermitian(4, 3.0));
  const Matrix op = rng.complex_matrix(4, 7);
  const double got = scale_norm(op, src, 0.6, -0.4, &tgt);
  const double expected = svd_scale_norm_oracle(op, src, 0.6, &tgt, -0.4);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(scale_norm(op, src, 0.5, 1.0, nullptr), dimension_mismatch);
  CHECK_THROWS_AS(scale_norm(rng.complex_matrix(4, 6), src, 0.0),
                  dimension_mismatch);
}

TEST_CASE("first resolvent identity") {
  RealVector one(1);
  one << 1.0;
  SpectralOperator scalar = SpectralOperator::diagonal(one);
  CHECK(first_resolvent_check(scalar, Complex(0, 1), Complex(0, 1)) == 0.0);
  CHECK(first_resolvent_check(scalar, Complex(0, 1), Complex(0, 2)) < 1e-15);

  RandomEngine rng(29);
  SpectralOperator h = SpectralOperator::from_hermitian(rng.hermitian(8, 10.0));
  CHECK(first_resolvent_check(h, Complex(1.0, 2.0), Complex(-3.0, -1.0)) < 1e-11);
}

TEST_CASE("resolvent adjoint pairs conjugate points") {
  RandomEngine rng(31);
  SpectralOperator h = SpectralOperator::from_hermitian(rng.hermitian(8, 10.0));
  const Complex z(0.7, 1.9);
  CHECK(operator_norm(h.resolvent(z).adjoint() - h.resolvent(std::conj(z))) <
        1e-12);
}

TEST_CASE("scale norms are submultiplicative through a middle index") {
  RandomEngine rng(37);
  SpectralOperator h = SpectralOperator::from_hermitian(rng.hermitian(6, 5.0));
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.complex_matrix(6, 6);
    const Matrix b = rng.complex_matrix(6, 6);
    const double s = -1.0 + 2.0 * rng.uniform();
    const double t = -1.0 + 2.0 * rng.uniform();
    const double u = -1.0 + 2.0 * rng.uniform();
    const double ab = scale_norm(a * b, h, s, u, &h);
    const double bb = scale_norm(b, h, s, t, &h);
    const double aa = scale_norm(a, h, t, u, &h);
    CHECK(ab <= bb * aa * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("weights invert each other") {
  RandomEngine rng(41);
  SpectralOperator h = SpectralOperator::from_hermitian(rng.hermitian(6, 9.0));
  for (double s : {-2.0, -0.5, 0.5, 2.0})
    CHECK(operator_norm(h.weight(s) * h.weight(-s) - Matrix::Identity(6, 6)) <
          1e-12);
}

TEST_CASE("default reference point avoids the spectrum") {
  RealVector gap(2);
  gap << 1.0, 3.0;
  CHECK(SpectralOperator::diagonal(gap).default_lambda0() == 0.0);
  RealVector touching(2);
  touching << 0.0, 3.0;
  CHECK(SpectralOperator::diagonal(touching).default_lambda0() == -1.0);
}
