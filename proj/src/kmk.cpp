#include "canomat/kmk.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace canomat {

KMKParams kmk_params(double kappa1, double kappa2) {
  if (!(kappa1 >= 0) || !(kappa2 >= 0)) throw std::invalid_argument("kmk_params: kappa must be >= 0");
  KMKParams k;
  k.kappa1 = kappa1;
  k.kappa2 = kappa2;
  const double s = 2.0 + kappa1 + kappa2;
  const double rad = 4.0 * std::sqrt((1.0 + kappa1) * (1.0 + kappa2) * (1.0 + kappa1 + kappa2));
  const double base = kappa1 * kappa1 - kappa2 * kappa2;
  k.u_minus = std::max(0.0, 0.5 + (base - rad) / (2.0 * s * s));
  k.u_plus = std::min(1.0, 0.5 + (base + rad) / (2.0 * s * s));
  k.U_o = (1.0 + kappa1) / s;
  k.U_e = 1.0 / s;
  return k;
}

double kmk_density(const KMKParams& k, double x) {
  if (!(x > k.u_minus && x < k.u_plus)) return 0.0;
  const double s = 2.0 + k.kappa();
  return s / (2.0 * std::numbers::pi) * std::sqrt((k.u_plus - x) * (x - k.u_minus)) / (x * (1.0 - x));
}

QuadratureRule kmk_rule(const KMKParams& k, int n_nodes) {
  if (n_nodes < 1) throw std::invalid_argument("kmk_rule: n_nodes must be positive");
  const double half_pi = 0.5 * std::numbers::pi;
  auto g = gauss_legendre(n_nodes, -half_pi, half_pi);
  const double r = 0.5 * (k.u_plus - k.u_minus);
  const double s = 2.0 + k.kappa();
  QuadratureRule out;
  for (int i = 0; i < n_nodes; ++i) {
    const double sn = std::sin(g.nodes[i]), cs = std::cos(g.nodes[i]);
    // distances to both edges without cancellation: (1 + sn)(1 - sn) = cs^2
    const double dm = r * (sn < 0 ? cs * cs / (1.0 - sn) : 1.0 + sn);
    const double dp = r * (sn > 0 ? cs * cs / (1.0 + sn) : 1.0 - sn);
    const double x = sn < 0 ? k.u_minus + dm : k.u_plus - dp;
    const double lo = k.u_minus == 0.0 ? dm : x;
    const double hi = k.u_plus == 1.0 ? dp : 1.0 - x;
    // density(x) dx = s/(2 pi) * (r cos th)^2 / (x(1-x)) dth, with (r cos th)^2 = dm dp
    out.nodes.push_back(x);
    out.weights.push_back(g.weights[i] * s / (2.0 * std::numbers::pi) * dm * dp / (lo * hi));
  }
  return out;
}

}  // namespace canomat
