#pragma once

#include "canomat/quadrature.hpp"

namespace canomat {

// Kesten-McKay reference law on [u_minus, u_plus] with constant canonical moments.
struct KMKParams {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double u_minus = 0.0;
  double u_plus = 1.0;
  double U_o = 0.5;  // odd canonical moments
  double U_e = 0.5;  // even canonical moments

  double kappa() const { return kappa1 + kappa2; }
};

KMKParams kmk_params(double kappa1, double kappa2);

// Scalar density; zero outside (u_minus, u_plus).
double kmk_density(const KMKParams& k, double x);

// Nodes and probability weights for the scalar KMK law: x = c + r sin(theta) with
// Gauss-Legendre in theta, so the square-root edge factor is absorbed.
QuadratureRule kmk_rule(const KMKParams& k, int n_nodes);

}  // namespace canomat
