#include "canomat/sumrule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "canomat/moment_chain.hpp"
#include "canomat/quadrature.hpp"

namespace canomat {

namespace {

Eigen::VectorXd real_spectrum(const CMatrix& U) {
  if (!U.allFinite()) throw NonConvergence("real_spectrum: non-finite entries");
  Eigen::ComplexEigenSolver<CMatrix> es(U, false);
  if (es.info() != Eigen::Success) throw NonConvergence("real_spectrum: solver did not converge");
  return es.eigenvalues().real();
}

double centred_logdet(const CMatrix& U, double w1, double w2, double c) {
  double s = 0.0;
  for (double l : real_spectrum(U)) {
    if (!(l > 0.0 && l < 1.0)) return inf;
    s += -w1 * (std::log(l) - std::log(c)) - w2 * (std::log1p(-l) - std::log1p(-c));
  }
  return s;
}

int numerical_rank(const HermitianMatrix& w) {
  auto l = eigenvalues(w);
  double tr = std::max(l.sum(), 0.0);
  int r = 0;
  for (int i = 0; i < l.size(); ++i) r += l(i) > 1e-8 * tr ? 1 : 0;
  return r;
}

}  // namespace

HermitianMatrix StructuredMeasure::mass() const { return to_measure().mass(); }

MatrixMeasure StructuredMeasure::to_measure() const {
  const int p = dim();
  std::vector<Atom> atoms;
  for (const auto& a : atoms_minus) atoms.push_back({a.x, a.w});
  for (const auto& a : atoms_plus) atoms.push_back({a.x, a.w});
  std::optional<AcPart> ac;
  if (!h_nodes.empty()) ac = AcPart{h_nodes, h_quad_weights, h_values};
  return MatrixMeasure(p, std::move(atoms), std::move(ac));
}

void StructuredMeasure::validate() const {
  if (h_nodes.size() != h_values.size() || h_nodes.size() != h_quad_weights.size())
    throw std::invalid_argument("StructuredMeasure: h arrays differ in length");
  for (double x : h_nodes)
    if (x < kmk.u_minus || x > kmk.u_plus) throw std::invalid_argument("StructuredMeasure: h node outside [u-,u+]");
  for (const auto& a : atoms_plus)
    if (!(a.x > kmk.u_plus && a.x <= 1.0)) throw std::invalid_argument("StructuredMeasure: atom_plus outside (u+,1]");
  for (const auto& a : atoms_minus)
    if (!(a.x >= 0.0 && a.x < kmk.u_minus)) throw std::invalid_argument("StructuredMeasure: atom_minus outside [0,u-)");
}

CanonicalSequence sequence_from_canonical(const CanonicalChain& canon) { return {canon.U, std::nullopt}; }

double H_e(const CMatrix& U, const KMKParams& k) { return centred_logdet(U, 1.0, 1.0 + k.kappa(), k.U_e); }

double H_o(const CMatrix& U, const KMKParams& k) {
  return centred_logdet(U, 1.0 + k.kappa1, 1.0 + k.kappa2, k.U_o);
}

double rate_I(double alpha, double alpha_prime, const HermitianMatrix& X) {
  if (!(alpha > 0) || !(alpha_prime > 0)) throw std::invalid_argument("rate_I: parameters must be positive");
  const int p = X.dim();
  const double s = alpha + alpha_prime;
  double v = p * alpha * std::log(alpha / s) + p * alpha_prime * std::log(alpha_prime / s);
  for (double l : eigenvalues(X)) {
    if (!(l > 0.0 && l < 1.0)) return inf;
    v += -alpha * std::log(l) - alpha_prime * std::log1p(-l);
  }
  return v;
}

CoefficientSide coefficient_side(const CanonicalSequence& seq, const KMKParams& k, int depth) {
  const int L = static_cast<int>(seq.head.size());
  auto get = [&](int j) -> const CMatrix* {
    if (j <= L) return &seq.head[j - 1];
    if (seq.tail) return j % 2 == 1 ? &seq.tail->first : &seq.tail->second;
    return nullptr;
  };
  CoefficientSide cs;
  double sum = 0.0;
  int small = 0;
  for (int kk = 1; kk <= depth; ++kk) {
    const CMatrix* odd = get(2 * kk - 1);
    if (!odd) break;
    const CMatrix* even = get(2 * kk);
    double inc = H_o(*odd, k) + (even ? H_e(*even, k) : 0.0);
    sum += inc;
    cs.partial_sums.push_back(sum);
    cs.truncation_depth = kk;
    small = std::abs(inc) < 1e-12 ? small + 1 : 0;
    if (!even) break;
  }
  cs.convergent = std::isfinite(sum) && small >= 3;
  if (seq.tail) {
    double t = H_o(seq.tail->first, k) + H_e(seq.tail->second, k);
    if (t > 1e-12) cs.tail_estimate = inf;
  }
  cs.total = sum + cs.tail_estimate;
  return cs;
}

double kl_divergence(const StructuredMeasure& sm) {
  double kl = 0.0;
  for (std::size_t i = 0; i < sm.h_values.size(); ++i) {
    auto l = eigenvalues(sm.h_values[i]);
    if (!(l(0) > 0.0)) return inf;
    double term = sm.h_quad_weights[i] * l.array().log().sum();
    if (term < -1e12) return inf;
    kl -= term;
  }
  return kl;
}

double outlier_F(const KMKParams& k, double x, int sign) {
  const double um = k.u_minus, up = k.u_plus;
  if (sign > 0) {
    if (!(x >= up && x <= 1.0)) return inf;
    if (x == up) return 0.0;
    if (x == 1.0) return inf;  // log divergence of 1/(1-t)
    // t = u+ + s^2
    auto f = [&](double s) {
      double t = up + s * s;
      return 2.0 * s * s * std::sqrt(t - um) / (t * (1.0 - t));
    };
    return integrate(f, 0.0, std::sqrt(x - up));
  }
  if (!(x >= 0.0 && x <= um)) return inf;
  if (x == um) return 0.0;
  if (x == 0.0) return inf;
  auto f = [&](double s) {
    double t = um - s * s;
    return 2.0 * s * s * std::sqrt(up - t) / (t * (1.0 - t));
  };
  return integrate(f, 0.0, std::sqrt(um - x));
}

double outlier_energy(const KMKParams& k, double x, int sign) {
  return (2.0 + k.kappa()) * outlier_F(k, x, sign);
}

MeasureSide measure_side(const StructuredMeasure& sm) {
  MeasureSide ms;
  ms.kl = kl_divergence(sm);
  for (const auto& a : sm.atoms_plus) ms.outliers_plus += numerical_rank(a.w) * outlier_energy(sm.kmk, a.x, +1);
  for (const auto& a : sm.atoms_minus) ms.outliers_minus += numerical_rank(a.w) * outlier_energy(sm.kmk, a.x, -1);
  ms.total = ms.kl + ms.outliers_plus + ms.outliers_minus;
  return ms;
}

SumRuleReport sum_rule_report(const StructuredMeasure& sm, const CanonicalSequence& seq, int depth, double tol) {
  SumRuleReport r;
  r.measure = measure_side(sm);
  r.coefficients = coefficient_side(seq, sm.kmk, depth);
  r.truncation_depth = r.coefficients.truncation_depth;
  r.tol = tol;
  const double l = r.measure.total, c = r.coefficients.total;
  if (std::isinf(l) && std::isinf(c)) {
    r.residual = 0.0;
  } else if (std::isinf(l) || std::isinf(c)) {
    r.residual = inf;
  } else {
    double scale = std::max(std::abs(l), std::abs(c));
    r.residual = scale > 1e-10 ? std::abs(l - c) / scale : std::abs(l - c);
  }
  r.pass = r.residual < tol;
  return r;
}

SumRuleCase kmk_mismatch_family(double k1, double k2, double k1p, double k2p, int p, int n_nodes) {
  auto ref = kmk_params(k1, k2);
  auto prime = kmk_params(k1p, k2p);
  if (prime.u_minus < ref.u_minus - 1e-15 || prime.u_plus > ref.u_plus + 1e-15)
    throw std::invalid_argument("kmk_mismatch_family: support of the measure must lie in the reference support");
  auto rule = kmk_rule(ref, n_nodes);
  SumRuleCase c;
  c.family = "kmk-mismatch";
  c.measure.kmk = ref;
  c.measure.h_nodes = rule.nodes;
  c.measure.h_quad_weights = rule.weights;
  for (double x : rule.nodes)
    c.measure.h_values.push_back(HermitianMatrix::scalar(p, kmk_density(prime, x) / kmk_density(ref, x)));
  c.canonical.tail = std::make_pair(CMatrix(prime.U_o * eye(p)), CMatrix(prime.U_e * eye(p)));
  return c;
}

namespace {

// Head of the block Jacobi operator with a constant scalar tail (B = b, A~ = a) attached
// after block j0.
struct FreeTailOperator {
  int p = 1;
  int j0 = 0;
  std::vector<CMatrix> B;       // B_1..B_j0
  std::vector<CMatrix> At;      // A~_1..A~_{j0-1}
  double b = 0.0, a = 0.0;

  // Stieltjes transform of the free tail; decaying root, Im m > 0 on the band.
  cplx m_free(double x) const {
    double d = (b - x) * (b - x) - 4.0 * a * a;
    if (d < 0) return cplx(b - x, std::sqrt(-d)) / (2.0 * a * a);
    double sg = (b - x) >= 0 ? 1.0 : -1.0;
    return cplx(((b - x) - sg * std::sqrt(d)) / (2.0 * a * a), 0.0);
  }
  double m_free_prime(double x) const {
    double m = m_free(x).real();
    return -m / (2.0 * a * a * m - (b - x));
  }

  CMatrix stieltjes(double x) const {
    const CMatrix I = eye(p);
    CMatrix T = m_free(x) * I;
    for (int j = j0; j >= 1; --j) {
      CMatrix C = j == j0 ? CMatrix(a * I) : At[j - 1];
      T = (B[j - 1] - x * I - C * T * C.adjoint()).inverse();
    }
    return T;
  }

  // Head matrix with the tail self-energy folded into the last block.
  HermitianMatrix effective(double lam) const {
    CMatrix K = CMatrix::Zero(j0 * p, j0 * p);
    for (int j = 0; j < j0; ++j) {
      K.block(j * p, j * p, p, p) = B[j];
      if (j + 1 < j0) {
        K.block(j * p, (j + 1) * p, p, p) = At[j];
        K.block((j + 1) * p, j * p, p, p) = At[j].adjoint();
      }
    }
    K.block((j0 - 1) * p, (j0 - 1) * p, p, p) -= a * a * m_free(lam).real() * eye(p);
    return HermitianMatrix(K);
  }

  HermitianMatrix truncated(int extra) const {
    const int n = j0 + extra;
    CMatrix J = CMatrix::Zero(n * p, n * p);
    for (int j = 0; j < n; ++j) {
      J.block(j * p, j * p, p, p) = j < j0 ? B[j] : CMatrix(b * eye(p));
      if (j + 1 < n) {
        CMatrix c = j + 1 < j0 ? At[j] : CMatrix(a * eye(p));
        J.block(j * p, (j + 1) * p, p, p) = c;
        J.block((j + 1) * p, j * p, p, p) = c.adjoint();
      }
    }
    return HermitianMatrix(J);
  }
};

double nearest(const Eigen::VectorXd& ev, double x) {
  double best = ev(0);
  for (int i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i) - x) < std::abs(best - x)) best = ev(i);
  return best;
}

// Solve lam in spec K(lam) near lam0 by secant iteration, staying outside the band.
double refine_outlier(const FreeTailOperator& op, double lam0, double lo, double hi) {
  auto g = [&](double l) { return nearest(eigenvalues(op.effective(l)), l) - l; };
  const double dir = lam0 > hi ? 1.0 : -1.0;
  auto clamp = [&](double l) { return dir > 0 ? std::max(l, hi + 1e-15) : std::min(l, lo - 1e-15); };
  double x0 = lam0, x1 = clamp(lam0 + dir * 1e-7);
  double g0 = g(x0), g1 = g(x1);
  for (int it = 0; it < 200 && g1 != 0.0; ++it) {
    if (g1 == g0) break;
    double x2 = clamp(x1 - g1 * (x1 - x0) / (g1 - g0));
    x0 = x1;
    g0 = g1;
    x1 = x2;
    g1 = g(x1);
    if (std::abs(x1 - x0) < 1e-16) break;
  }
  return x1;
}

}  // namespace

SumRuleCase perturbed_kmk_family(double k1, double k2, const std::vector<HermitianMatrix>& perturbations,
                                 int n_nodes) {
  if (perturbations.empty()) throw std::invalid_argument("perturbed_kmk_family: no perturbations");
  auto ref = kmk_params(k1, k2);
  const int K = static_cast<int>(perturbations.size());
  const int p = perturbations[0].dim();
  const int depth = K + 4;
  std::vector<HermitianMatrix> uh;
  for (int k = 1; k <= 2 * depth - 1; ++k) {
    double c = k % 2 == 1 ? ref.U_o : ref.U_e;
    uh.push_back(k <= K ? HermitianMatrix::scalar(p, c) + perturbations[k - 1] : HermitianMatrix::scalar(p, c));
  }
  auto canon = canonical_from_hermitian(uh);
  auto chain = canonical_to_recursion(canon);

  FreeTailOperator op;
  op.p = p;
  op.j0 = K + 3;
  const double zo = (1.0 - ref.U_e) * ref.U_o, ze = (1.0 - ref.U_o) * ref.U_e;
  op.b = zo + ze;
  op.a = std::sqrt(zo * ze);
  for (int j = 0; j < op.j0; ++j) op.B.push_back(chain.B[j].mat());
  for (int j = 0; j + 1 < op.j0; ++j) op.At.push_back(chain.A_tilde[j]);
  if ((chain.B[op.j0].mat() - op.b * eye(p)).norm() > 1e-10 ||
      (chain.A_tilde[op.j0 - 1] - op.a * eye(p)).norm() > 1e-10)
    throw std::logic_error("perturbed_kmk_family: recursion tail is not constant");

  SumRuleCase c;
  c.family = "perturbed-kmk";
  auto& sm = c.measure;
  sm.kmk = ref;
  auto rule = kmk_rule(ref, n_nodes);
  sm.h_nodes = rule.nodes;
  sm.h_quad_weights = rule.weights;
  for (double x : rule.nodes) {
    CMatrix M = op.stieltjes(x);
    CMatrix im = (M - M.adjoint()) / cplx(0.0, 2.0);
    sm.h_values.emplace_back(im / (std::numbers::pi * kmk_density(ref, x)));
  }

  // outliers: candidates from a long truncation, then the exact nonlinear eigenproblem
  const double lo = op.b - 2.0 * op.a, hi = op.b + 2.0 * op.a;
  auto ev = eigenvalues(op.truncated(300));
  std::vector<double> roots;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > lo - 1e-9 && ev(i) < hi + 1e-9) continue;
    double r = refine_outlier(op, ev(i), lo, hi);
    bool dup = false;
    for (double q : roots) dup = dup || std::abs(q - r) < 1e-9;
    if (!dup) roots.push_back(r);
  }
  for (double lam : roots) {
    auto ed = herm_eigen(op.effective(lam));
    CMatrix w = CMatrix::Zero(p, p);
    for (int i = 0; i < ed.eigenvalues.size(); ++i) {
      if (std::abs(ed.eigenvalues(i) - lam) > 1e-8) continue;
      CVector psi = ed.eigenvectors.col(i);
      CVector first = psi.head(p), last = psi.tail(p);
      double norm2 = 1.0 + op.a * op.a * op.m_free_prime(lam) * last.squaredNorm();
      w += first * first.adjoint() / norm2;
    }
    Outlier o{lam, HermitianMatrix(w)};
    if (lam > hi) sm.atoms_plus.push_back(o);
    else sm.atoms_minus.push_back(o);
  }
  std::sort(sm.atoms_plus.begin(), sm.atoms_plus.end(), [](const Outlier& x, const Outlier& y) { return x.x > y.x; });
  std::sort(sm.atoms_minus.begin(), sm.atoms_minus.end(), [](const Outlier& x, const Outlier& y) { return x.x < y.x; });

  for (int k = 1; k <= K; ++k) c.canonical.head.push_back(uh[k - 1].mat());
  c.canonical.tail = std::make_pair(CMatrix(ref.U_o * eye(p)), CMatrix(ref.U_e * eye(p)));
  return c;
}

GemReport gem_check(const CanonicalSequence& seq, const KMKParams& k, int depth) {
  const int L = static_cast<int>(seq.head.size());
  auto dev = [&](const CMatrix& U, double c) {
    CMatrix d = U - c * eye(static_cast<int>(U.rows()));
    return (d * d).trace().real();
  };
  GemReport g;
  double sum = 0.0;
  int small = 0;
  for (int kk = 1; kk <= depth; ++kk) {
    double inc = 0.0;
    bool any = false;
    for (int j : {2 * kk - 1, 2 * kk}) {
      const CMatrix* U = nullptr;
      if (j <= L) U = &seq.head[j - 1];
      else if (seq.tail) U = j % 2 == 1 ? &seq.tail->first : &seq.tail->second;
      if (!U) continue;
      any = true;
      inc += dev(*U, j % 2 == 1 ? k.U_o : k.U_e);
    }
    if (!any) break;
    sum += inc;
    g.partial_sums.push_back(sum);
    small = std::abs(inc) < 1e-12 ? small + 1 : 0;
  }
  g.plateau = small >= 3;
  g.ell2_sum = sum;
  if (seq.tail && dev(seq.tail->first, k.U_o) + dev(seq.tail->second, k.U_e) > 1e-24) g.ell2_sum = inf;
  return g;
}

GemReport gem_check(const CanonicalSequence& seq, const KMKParams& k, int depth, const StructuredMeasure& sm) {
  GemReport g = gem_check(seq, k, depth);
  g.conditions_evaluable = true;
  g.support_ok = true;
  for (const auto& a : sm.atoms_plus) g.support_ok = g.support_ok && a.x > k.u_plus && a.x <= 1.0;
  for (const auto& a : sm.atoms_minus) g.support_ok = g.support_ok && a.x >= 0.0 && a.x < k.u_minus;
  double s = 0.0;
  for (const auto& a : sm.atoms_plus) s += std::pow(a.x - k.u_plus, 1.5);
  for (const auto& a : sm.atoms_minus) s += std::pow(k.u_minus - a.x, 1.5);
  g.outliers_summable = std::isfinite(s);
  g.log_integrable = std::isfinite(kl_divergence(sm));
  return g;
}

}  // namespace canomat
