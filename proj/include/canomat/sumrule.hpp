#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "canomat/canonical.hpp"
#include "canomat/hermitian.hpp"
#include "canomat/kmk.hpp"
#include "canomat/measure.hpp"

namespace canomat {

struct Outlier {
  double x;
  HermitianMatrix w;
};

// h * Sigma_KMK on the reference quadrature nodes plus outlying atoms.
struct StructuredMeasure {
  KMKParams kmk;
  std::vector<double> h_nodes;
  std::vector<double> h_quad_weights;  // probability weights of the scalar KMK law
  std::vector<HermitianMatrix> h_values;
  std::vector<Outlier> atoms_plus;   // in (u_plus, 1]
  std::vector<Outlier> atoms_minus;  // in [0, u_minus)

  int dim() const { return h_values.empty() ? atoms_plus.front().w.dim() : h_values.front().dim(); }
  HermitianMatrix mass() const;
  MatrixMeasure to_measure() const;
  void validate() const;
};

// Canonical moments U_1, U_2, ... given as an explicit head, optionally continued
// periodically: U_j = tail->first for odd j and tail->second for even j beyond the head.
struct CanonicalSequence {
  std::vector<CMatrix> head;
  std::optional<std::pair<CMatrix, CMatrix>> tail;
};

CanonicalSequence sequence_from_canonical(const CanonicalChain& canon);

// Similarity-invariant functionals; +inf when the spectrum leaves (0, 1).
double H_e(const CMatrix& U, const KMKParams& k);
double H_o(const CMatrix& U, const KMKParams& k);

// -a logdet X - a' logdet(1 - X) + p a log(a/(a+a')) + p a' log(a'/(a+a')).
double rate_I(double alpha, double alpha_prime, const HermitianMatrix& X);

struct CoefficientSide {
  std::vector<double> partial_sums;  // after each pair k: H_o(U_{2k-1}) + H_e(U_{2k})
  double tail_estimate = 0.0;
  double total = 0.0;
  bool convergent = false;  // 3 consecutive increments below 1e-12
  int truncation_depth = 0; // number of pairs summed
};

CoefficientSide coefficient_side(const CanonicalSequence& seq, const KMKParams& k, int depth);

// -sum_i q_i log det h(x_i); +inf when h is singular at a node.
double kl_divergence(const StructuredMeasure& sm);

// Outlier functionals F^+ (sign > 0) and F^- (sign < 0); +inf outside their domain.
double outlier_F(const KMKParams& k, double x, int sign);

// Contribution of one rank-1 outlier to the measure side: (2 + kappa1 + kappa2) F^{+-}(x).
double outlier_energy(const KMKParams& k, double x, int sign);

struct MeasureSide {
  double kl = 0.0;
  double outliers_plus = 0.0;
  double outliers_minus = 0.0;
  double total = 0.0;
};

MeasureSide measure_side(const StructuredMeasure& sm);

struct SumRuleReport {
  MeasureSide measure;
  CoefficientSide coefficients;
  double residual = 0.0;  // 0 when both sides are +inf, +inf when only one is
  int truncation_depth = 0;
  double tol = 0.0;
  bool pass = false;
};

SumRuleReport sum_rule_report(const StructuredMeasure& sm, const CanonicalSequence& seq, int depth, double tol);

struct SumRuleCase {
  std::string family;
  StructuredMeasure measure;
  CanonicalSequence canonical;
};

// Sigma = KMK(k1', k2') * identity against reference KMK(k1, k2). h is the density ratio
// on the reference nodes; canonical moments are the constant KMK(k1', k2') values.
SumRuleCase kmk_mismatch_family(double k1, double k2, double k1p, double k2p, int p, int n_nodes);

// Hermitian canonical moments U_k = centre + perturbation[k-1] for k <= K and centres
// beyond. The measure is obtained from the matrix continued fraction with the exact
// free tail; outliers from the nonlinear eigenproblem of the head.
SumRuleCase perturbed_kmk_family(double k1, double k2, const std::vector<HermitianMatrix>& perturbations,
                                 int n_nodes);

struct GemReport {
  double ell2_sum = 0.0;
  std::vector<double> partial_sums;
  bool plateau = false;              // last 3 increments below 1e-12
  bool conditions_evaluable = false;
  bool support_ok = false;
  bool outliers_summable = false;
  bool log_integrable = false;
};

GemReport gem_check(const CanonicalSequence& seq, const KMKParams& k, int depth);
GemReport gem_check(const CanonicalSequence& seq, const KMKParams& k, int depth, const StructuredMeasure& sm);

}  // namespace canomat
