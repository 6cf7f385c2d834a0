#include "canomat/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace canomat {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  auto r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = c + h * r.nodes[i];
    r.weights[i] *= h;
  }
  return r;
}

QuadratureRule arcsine_rule(int n) {
  if (n < 1) throw std::invalid_argument("arcsine_rule: n must be positive");
  QuadratureRule r;
  for (int i = 1; i <= n; ++i) {
    r.nodes.push_back(0.5 * (1.0 + std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n))));
    r.weights.push_back(1.0 / n);
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  static const QuadratureRule g = gauss_legendre(32);
  auto panel_sum = [&](int panels) {
    double h = (b - a) / panels, s = 0.0;
    for (int k = 0; k < panels; ++k) {
      double c = a + (k + 0.5) * h;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(c + 0.5 * h * g.nodes[i]);
    }
    return 0.5 * h * s;
  };
  double prev = panel_sum(1);
  for (int panels = 2; panels <= (1 << 14); panels *= 2) {
    double cur = panel_sum(panels);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || cur == prev) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace canomat
