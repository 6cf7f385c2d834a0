#include <doctest.h>

#include "canomat/errors.hpp"
#include "canomat/hermitian.hpp"
#include "canomat/quadrature.hpp"
#include "helpers.hpp"

using namespace canomat;
using testing::random_hermitian;
using testing::random_pd;

TEST_CASE("construction symmetrizes and keeps a real diagonal") {
  CMatrix a(2, 2);
  a << cplx(1, 0.5), cplx(2, 1), cplx(0, 0), cplx(3, -1);
  HermitianMatrix h(a);
  CHECK((h.mat() - h.mat().adjoint()).norm() == 0.0);
  CHECK(h(0, 0).imag() == 0.0);
  CHECK(h(0, 1) == cplx(1.0, 0.5));
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
  Rng rng(3);
  for (int p : {1, 2, 5}) {
    auto h = random_hermitian(p, rng);
    auto e = herm_eigen(h);
    CMatrix back = e.eigenvectors * e.eigenvalues.cast<cplx>().asDiagonal() * e.eigenvectors.adjoint();
    CHECK((back - h.mat()).norm() < 1e-12);
    for (int i = 1; i < p; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
  }
}

TEST_CASE("non-finite input raises NonConvergence") {
  CMatrix a = CMatrix::Identity(2, 2);
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(herm_eigen(HermitianMatrix(a)), NonConvergence);
}

TEST_CASE("square root, inverse square root and log of PD matrices") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto a = random_pd(3, rng);
    auto s = pd_sqrt(a);
    CHECK((s.mat() * s.mat() - a.mat()).norm() < 1e-12 * a.norm());
    CHECK((pd_inv_sqrt(a).mat() * s.mat() - eye(3)).norm() < 1e-11);
    CHECK(pd_log(a).trace() == doctest::Approx(logdet_pd(a)).epsilon(1e-12));
    CHECK(std::exp(logdet_pd(a)) == doctest::Approx(a.mat().determinant().real()).epsilon(1e-10));
  }
}

TEST_CASE("matrix functions reject spectra outside their domain") {
  auto a = HermitianMatrix::scalar(2, -1.0);
  CHECK_THROWS_AS(pd_sqrt(a), SpectrumOutOfDomain);
  CHECK_THROWS_AS(pd_log(HermitianMatrix::zero(2)), SpectrumOutOfDomain);
}

TEST_CASE("scaled power accepts tiny but well-conditioned matrices") {
  auto a = HermitianMatrix::scalar(2, 1e-40);
  auto r = pd_power_scaled(a, -0.5);
  CHECK(r(0, 0).real() == doctest::Approx(1e20));
  CMatrix s = CMatrix::Identity(2, 2);
  s(1, 1) = 1e-20;
  CHECK_THROWS_AS(pd_power_scaled(HermitianMatrix(s), 0.5), SpectrumOutOfDomain);
}

TEST_CASE("Loewner bracket") {
  auto z = HermitianMatrix::zero(2), one = HermitianMatrix::identity(2);
  CHECK(loewner_strictly_between(HermitianMatrix::scalar(2, 0.5), z, one, 0.1));
  CHECK_FALSE(loewner_strictly_between(HermitianMatrix::scalar(2, 0.95), z, one, 0.1));
  CHECK_FALSE(loewner_strictly_between(HermitianMatrix::scalar(2, 1.0), z, one, 0.0));
}

TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n-1") {
  auto r = gauss_legendre(10, 0.0, 1.0);
  for (int d = 0; d < 20; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], d);
    CHECK(s == doctest::Approx(1.0 / (d + 1)).epsilon(1e-14));
  }
}

TEST_CASE("adaptive integration") {
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0 / 3).epsilon(1e-10));
}

TEST_CASE("arcsine rule moments") {
  auto r = arcsine_rule(50);
  // E x^k = C(2k, k) / 4^k for the arcsine law on [0, 1]
  double c = 1.0;
  for (int k = 0; k < 20; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    CHECK(s == doctest::Approx(c).epsilon(1e-13));
    c *= (2.0 * k + 1) * (2.0 * k + 2) / ((k + 1.0) * (k + 1.0) * 4.0);
  }
}
