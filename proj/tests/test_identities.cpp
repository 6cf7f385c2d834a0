#include <doctest.h>

#include "canomat/canonical.hpp"
#include "canomat/identities.hpp"
#include "canomat/moment_chain.hpp"
#include "helpers.hpp"

using namespace canomat;

TEST_CASE("determinant identities on random JUE measures") {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{1, 6}, {2, 4}, {3, 3}}) {
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto reports = check_det_identities(testing::jue_measure(p, n, s % 2, s / 4, 40 + s), n);
      CHECK(reports.size() >= 4);
      for (const auto& r : reports) CHECK_MESSAGE(r.pass, r.name << " residual " << r.residual);
    }
  }
}

TEST_CASE("det J and det(I - J) against the monic polynomial at 0 and 1") {
  auto m = testing::jue_measure(2, 4, 1, 0, 3);
  auto chain = gram_schmidt(m, 4);
  auto reports = check_det_identities(m, 4);
  // det(z - J) = det P_n(z), so det J = det P_n(0) (8 = np even) and det(I - J) = det P_n(1)
  cplx detJ = eval_monic_op(chain, 4, 0.0).determinant();
  cplx detIJ = eval_monic_op(chain, 4, 1.0).determinant();
  for (const auto& r : reports) {
    if (r.name.rfind("det_J_", 0) == 0) CHECK(std::abs(r.rhs - detJ) < 1e-10 * std::abs(detJ));
    if (r.name.rfind("det_I_minus_J_", 0) == 0) CHECK(std::abs(r.rhs - detIJ) < 1e-10 * std::abs(detIJ));
  }
}

TEST_CASE("Schur recursion closed form") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto m = testing::jue_measure(2, 4, s % 2, 1, 70 + s);
    auto chain = gram_schmidt(m, 4);
    auto canon = canonical_from_recursion(chain);
    auto rs = check_schur_recursion(chain, canon);
    CHECK(rs.size() == 4);
    for (const auto& r : rs) CHECK_MESSAGE(r.pass, r.name << " residual " << r.residual);
  }
}

TEST_CASE("arcsine law maps to vanishing Verblunsky coefficients") {
  auto chain = gram_schmidt(arcsine_measure(2, 200), 5);
  auto a = szego_verblunsky(chain);
  CHECK(a.size() == 9);
  for (const auto& al : a.alpha) CHECK(al.norm() < 1e-10);
  // free case: Phi_k(z) = z^k
  for (int k = 0; k <= 8; ++k) {
    cplx z(0.6, 0.8);
    CHECK((szego_phi(a, k, z) - std::pow(z, k) * eye(2)).norm() < 1e-10);
  }
}

TEST_CASE("Szego-map identity") {
  SUBCASE("free case") {
    auto chain = gram_schmidt(arcsine_measure(2, 200), 4);
    auto r = check_ym(chain, 4, default_z_samples());
    CHECK(r.residual < 1e-10);
  }
  SUBCASE("random measures") {
    for (auto [p, n] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 2}, {2, 4}}) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        auto chain = gram_schmidt(testing::jue_measure(p, n, 0, 1, 300 + s), n);
        auto r = check_ym(chain, n, default_z_samples());
        CHECK_MESSAGE(r.pass, "p=" << p << " n=" << n << " residual " << r.residual);
      }
    }
  }
  SUBCASE("measure given on [-2, 2]") {
    auto m = testing::jue_measure(2, 3, 1, 1, 8);
    auto r = check_ym(pushforward(m, 2.0, -4.0), 3, default_z_samples());
    CHECK(r.pass);
  }
}

TEST_CASE("default sample points are the 8th roots of unity") {
  auto z = default_z_samples();
  CHECK(z.size() == 8);
  for (auto w : z) CHECK(std::abs(std::pow(w, 8) - 1.0) < 1e-12);
}

TEST_CASE("Verblunsky coefficients must lie strictly inside (-1, 1)") {
  CHECK_THROWS_AS(make_verblunsky({HermitianMatrix::scalar(1, 1.0)}), BoundaryDegeneracy);
  auto v = make_verblunsky({HermitianMatrix::scalar(2, 0.6)});
  CHECK((v.rho[0].mat() - 0.8 * eye(2)).norm() < 1e-14);
  CHECK((v.kappa[1] - eye(2) / 0.8).norm() < 1e-14);
}
