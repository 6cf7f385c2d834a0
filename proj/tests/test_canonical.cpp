#include <doctest.h>

#include "canomat/canonical.hpp"
#include "canomat/errors.hpp"
#include "canomat/moment_chain.hpp"
#include "helpers.hpp"

using namespace canomat;

namespace {

Eigen::VectorXd sorted_real_eigs(const CMatrix& a) {
  Eigen::VectorXd l = Eigen::ComplexEigenSolver<CMatrix>(a, false).eigenvalues().real();
  std::sort(l.data(), l.data() + l.size());
  return l;
}

}  // namespace

TEST_CASE("Beta laws have the closed-form canonical moments") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {2, 2}, {2, 3}, {1, 2}}) {
    auto canon = canonical_from_recursion(gram_schmidt(testing::beta_measure(a, b, 2, 40), 6));
    for (int k = 1; k <= canon.m; ++k) {
      CHECK((canon.U_herm[k - 1].mat() - testing::beta_canonical(a, b, k) * eye(2)).norm() < 1e-12);
    }
  }
}

TEST_CASE("arcsine quadrature has all canonical moments 1/2") {
  auto canon = canonical_from_recursion(gram_schmidt(arcsine_measure(2, 100), 10));
  for (const auto& u : canon.U_herm) CHECK((u.mat() - 0.5 * eye(2)).norm() < 1e-12);
}

TEST_CASE("Hermitian canonical moments: similarity, range and moment bounds") {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{1, 6}, {2, 4}, {3, 3}}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto m = testing::jue_measure(p, n, s % 2, (s / 2) % 2, 500 + s);
      auto chain = gram_schmidt(m, n);
      auto canon = canonical_from_recursion(chain);
      REQUIRE(canon.m == 2 * n - 1);
      auto nested = nested_hermitian_canonical(canon);
      for (int k = 1; k <= canon.m; ++k) {
        auto l = eigenvalues(canon.U_herm[k - 1]);
        CHECK(l.minCoeff() > 0.0);
        CHECK(l.maxCoeff() < 1.0);
        CHECK((sorted_real_eigs(canon.U[k - 1]) - l).norm() < 1e-9);
        CHECK((eigenvalues(nested[k - 1]) - l).norm() < 1e-9);
        CHECK((hermitian_canonical_direct(canon, k).mat() - canon.U_herm[k - 1].mat()).norm() < 1e-12);
        // M^- <= c_k <= M^+
        auto ck = moment(m, k);
        CHECK(min_eig(ck - canon.M_minus[k - 1]) > -1e-12);
        CHECK(min_eig(canon.M_plus[k - 1] - ck) > -1e-12);
      }
    }
  }
}

TEST_CASE("canonical moments determine the recursion") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto m = testing::jue_measure(2, 4, 1, 1, 900 + s);
    auto chain = gram_schmidt(m, 4);
    auto canon = canonical_from_recursion(chain);
    auto back = canonical_to_recursion(canon);
    for (int k = 0; k < 4; ++k) CHECK((back.u[k] - chain.u[k]).norm() < 1e-10);
    for (int k = 0; k < 3; ++k) CHECK((back.v[k] - chain.v[k]).norm() < 1e-10);
    auto rebuilt = canonical_from_hermitian(canon.U_herm);
    for (int k = 0; k < canon.m; ++k) CHECK((rebuilt.U[k] - canon.U[k]).norm() < 1e-9);
  }
}

TEST_CASE("any Hermitian sequence strictly inside (0,1) is realized") {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    std::vector<HermitianMatrix> u;
    for (int k = 0; k < 7; ++k) {
      auto h = testing::random_hermitian(2, rng);
      double s = std::max(std::abs(min_eig(h)), std::abs(max_eig(h)));
      u.push_back(HermitianMatrix::scalar(2, 0.5) + (0.45 / s) * h);
    }
    auto canon = canonical_from_hermitian(u);
    auto chain = canonical_to_recursion(canon);
    auto m = spectral_measure(build_block_jacobi(chain).J, 2);
    for (const auto& a : m.atoms()) {
      CHECK(a.x > 0.0);
      CHECK(a.x < 1.0);
    }
    auto again = canonical_from_recursion(gram_schmidt(m, 4));
    for (int k = 0; k < 7; ++k) CHECK((again.U_herm[k].mat() - u[k].mat()).norm() < 1e-8);
  }
}

TEST_CASE("boundary degeneracy is reported with its index") {
  // an atom at 0 puts the measure on the boundary of the moment space
  std::vector<Atom> atoms{{0.0, HermitianMatrix::scalar(1, 0.25)},
                          {0.3, HermitianMatrix::scalar(1, 0.25)},
                          {0.6, HermitianMatrix::scalar(1, 0.25)},
                          {0.9, HermitianMatrix::scalar(1, 0.25)}};
  auto chain = gram_schmidt(MatrixMeasure(1, atoms), 4);
  try {
    canonical_from_recursion(chain);
    FAIL("expected BoundaryDegeneracy");
  } catch (const BoundaryDegeneracy& e) {
    CHECK(e.index >= 1);
    CHECK(std::string(e.what()).find(std::to_string(e.index)) != std::string::npos);
  }
}

TEST_CASE("unnormalized measures are rejected") {
  MatrixMeasure m(1, {{0.2, HermitianMatrix::scalar(1, 1.0)}, {0.5, HermitianMatrix::scalar(1, 1.0)}});
  CHECK_THROWS_AS(canonical_from_recursion(gram_schmidt(m, 2)), std::invalid_argument);
}
