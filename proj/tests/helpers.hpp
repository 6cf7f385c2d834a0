#pragma once

#include <cmath>
#include <vector>

#include "canomat/ensembles.hpp"
#include "canomat/hermitian.hpp"
#include "canomat/measure.hpp"
#include "canomat/quadrature.hpp"

namespace testing {

using namespace canomat;

inline HermitianMatrix random_hermitian(int p, Rng& rng, double scale = 1.0) {
  CMatrix a(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a(i, j) = rng.complex_normal() * scale;
  return HermitianMatrix(a);
}

inline HermitianMatrix random_pd(int p, Rng& rng) {
  CMatrix a(p, p + 2);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p + 2; ++j) a(i, j) = rng.complex_normal();
  return HermitianMatrix(a * a.adjoint() / double(p + 2) + 0.1 * eye(p));
}

inline MatrixMeasure jue_measure(int p, int n, int a, int b, std::uint64_t seed) {
  Rng rng(seed);
  return spectral_sample_measure({EnsembleKind::JUE, n * p, p, a, b, seed}, rng);
}

// Scalar Beta(a, b) law times identity, discretized by Gauss-Legendre on [0, 1].
inline MatrixMeasure beta_measure(double a, double b, int p, int nodes) {
  auto rule = gauss_legendre(nodes, 0.0, 1.0);
  const double norm = std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  AcPart ac;
  ac.nodes = rule.nodes;
  ac.quad_weights = rule.weights;
  for (double x : rule.nodes)
    ac.densities.push_back(HermitianMatrix::scalar(p, std::pow(x, a - 1) * std::pow(1 - x, b - 1) / norm));
  return MatrixMeasure(p, {}, ac);
}

// Canonical moments of Beta(a, b) on [0, 1], k 1-based.
inline double beta_canonical(double a, double b, int k) {
  if (k % 2 == 1) {
    int j = (k + 1) / 2;
    return (a + j - 1) / (a + b + 2 * j - 2);
  }
  int j = k / 2;
  return j / (a + b + 2 * j - 1);
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
