#pragma once

#include <functional>
#include <vector>

namespace canomat {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], Newton iteration on the three-term recurrence.
QuadratureRule gauss_legendre(int n);

// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Gauss-Chebyshev (first kind) rule for the arcsine law on [0, 1]; equal weights 1/n.
QuadratureRule arcsine_rule(int n);

// Composite Gauss-Legendre integration, panel count doubled until the relative
// change drops below rel_tol.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13);

}  // namespace canomat
