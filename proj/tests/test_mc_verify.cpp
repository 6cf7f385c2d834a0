#include <doctest.h>

#include <atomic>

#include "canomat/mc_verify.hpp"
#include "helpers.hpp"

using namespace canomat;

TEST_CASE("pairwise merge equals a single pass") {
  Rng rng(1);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(rng.normal() * 3 + 1e6);
  RunningMoments all, a, b;
  for (int i = 0; i < 1000; ++i) {
    all.add(xs[i]);
    (i < 377 ? a : b).add(xs[i]);
  }
  a.merge(b);
  CHECK(a.count == all.count);
  CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-15));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
  RunningMoments empty;
  empty.merge(all);
  CHECK(empty.mean == all.mean);
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, 4, [&](int i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("canonical JUE parameters") {
  // p = 1, n = 2, a = b = 0: Beta(2,2), Beta(1,2), Beta(1,1)
  CHECK(canonical_jue_parameters(1, 2, 0, 0, 1) == std::pair{1, 1});
  CHECK(canonical_jue_parameters(1, 2, 0, 0, 2) == std::pair{0, 1});
  CHECK(canonical_jue_parameters(1, 2, 0, 0, 3) == std::pair{0, 0});
  CHECK(canonical_jue_parameters(2, 3, 1, 2, 1) == std::pair{5, 6});
  CHECK(canonical_jue_parameters(2, 3, 1, 2, 2) == std::pair{2, 7});
  CHECK_THROWS_AS(canonical_jue_parameters(2, 3, 0, 0, 6), std::invalid_argument);
}

TEST_CASE("config validation") {
  McTestConfig c;
  c.samples = 99;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.samples = 100;
  c.a = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(statistic_from_string(to_string(Statistic::LogDetComplement)) == Statistic::LogDetComplement);
}

TEST_CASE("reports do not depend on the thread count") {
  McTestConfig c;
  c.p = 1;
  c.n = 2;
  c.samples = 500;
  c.threads = 1;
  auto r1 = run_jacobi_canonical_test(c);
  c.threads = 3;
  auto r3 = run_jacobi_canonical_test(c);
  REQUIRE(r1.cells.size() == r3.cells.size());
  for (std::size_t i = 0; i < r1.cells.size(); ++i) {
    CHECK(r1.cells[i].mean == r3.cells[i].mean);
    CHECK(r1.cells[i].ref_mean == r3.cells[i].ref_mean);
    CHECK(r1.cells[i].z == r3.cells[i].z);
  }
}

TEST_CASE("scalar canonical moments are Beta distributed") {
  McTestConfig c;
  c.p = 1;
  c.n = 2;
  c.samples = 4000;
  c.statistics = {Statistic::Trace};
  auto r = run_jacobi_canonical_test(c);
  CHECK(r.pass);
  const double means[] = {0.5, 1.0 / 3, 0.5};
  for (const auto& cell : r.cells) CHECK(std::abs(cell.mean - means[cell.index - 1]) < 4 * cell.se);
}

TEST_CASE("sampling routes agree") {
  McTestConfig c;
  c.p = 2;
  c.n = 2;
  c.a = 1;
  c.samples = 2000;
  auto r = run_route_comparison_test(c);
  CHECK(r.pass);
  CHECK(r.degeneracy_events == 0);
}

TEST_CASE("GUE coefficients") {
  auto r = run_gue_coefficient_test(2, 3, 3000, 11);
  CHECK(r.pass);
  CHECK(r.cells.size() == 10);
}

TEST_CASE("KMK limit trend") {
  auto r = run_kmk_limit_test(1, {2, 8, 32}, 0.5, 0.5, 400, 5);
  CHECK(r.errors.size() == 3);
  CHECK(r.trend_pass);
  CHECK_THROWS_AS(run_kmk_limit_test(1, {3}, 0.5, 0.5, 100, 5), std::invalid_argument);
}
