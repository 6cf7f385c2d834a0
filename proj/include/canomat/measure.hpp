#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "canomat/hermitian.hpp"
#include "canomat/kmk.hpp"

namespace canomat {

struct Atom {
  double x;
  HermitianMatrix w;
};

// Quadrature-discretized absolutely continuous part:
// integral f dSigma ~ sum_i quad_weights[i] * densities[i] * f(nodes[i]).
struct AcPart {
  std::vector<double> nodes;
  std::vector<double> quad_weights;
  std::vector<HermitianMatrix> densities;
};

// p x p matrix measure on the real line: atoms plus an optional discretized ac part.
class MatrixMeasure {
 public:
  MatrixMeasure(int p, std::vector<Atom> atoms, std::optional<AcPart> ac = std::nullopt);

  int dim() const { return p_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<AcPart>& ac() const { return ac_; }

  // Flattened support: atoms followed by ac nodes, each with its effective weight.
  const std::vector<std::pair<double, CMatrix>>& support() const { return support_; }

  HermitianMatrix mass() const;
  bool is_normalized(double tol = 1e-10) const;

 private:
  int p_;
  std::vector<Atom> atoms_;
  std::optional<AcPart> ac_;
  std::vector<std::pair<double, CMatrix>> support_;
};

// Right-module matrix polynomial P(x) = sum_k x^k C_k.
struct MatrixPolynomial {
  std::vector<CMatrix> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int dim() const { return static_cast<int>(coeffs.front().rows()); }
  bool is_monic(double tol = 0.0) const;
  CMatrix eval(cplx z) const;
};

HermitianMatrix moment(const MatrixMeasure& s, int k);

// <<f, g>> = integral f(x)^* dSigma(x) g(x).
CMatrix inner_product(const MatrixMeasure& s, const MatrixPolynomial& f, const MatrixPolynomial& g);

// KMK(kappa1, kappa2) * identity on n_nodes theta-substituted Gauss-Legendre nodes.
MatrixMeasure kmk_measure(double kappa1, double kappa2, int p, int n_nodes);

// Arcsine law on [0, 1] times identity, Gauss-Chebyshev nodes.
MatrixMeasure arcsine_measure(int p, int n_nodes);

// Image of the measure under x -> c + s x.
MatrixMeasure pushforward(const MatrixMeasure& m, double c, double s);

}  // namespace canomat
