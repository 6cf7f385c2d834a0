#include "canomat/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace canomat {

MatrixMeasure::MatrixMeasure(int p, std::vector<Atom> atoms, std::optional<AcPart> ac)
    : p_(p), atoms_(std::move(atoms)), ac_(std::move(ac)) {
  if (p < 1) throw std::invalid_argument("MatrixMeasure: dim must be >= 1");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (a.w.dim() != p) throw std::invalid_argument("MatrixMeasure: atom weight has wrong dimension");
    if (!std::isfinite(a.x)) throw std::invalid_argument("MatrixMeasure: atom location not finite");
    if (min_eig(a.w) < -1e-12)
      throw std::invalid_argument("MatrixMeasure: atom " + std::to_string(i) + " weight not PSD");
  }
  std::vector<double> xs;
  for (const auto& a : atoms_) xs.push_back(a.x);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
    throw std::invalid_argument("MatrixMeasure: atom locations must be distinct");

  if (ac_) {
    const auto& c = *ac_;
    if (c.nodes.size() != c.quad_weights.size() || c.nodes.size() != c.densities.size())
      throw std::invalid_argument("MatrixMeasure: ac part arrays differ in length");
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      if (!(c.quad_weights[i] > 0)) throw std::invalid_argument("MatrixMeasure: quad weights must be positive");
      if (c.densities[i].dim() != p) throw std::invalid_argument("MatrixMeasure: density has wrong dimension");
    }
  }

  for (const auto& a : atoms_) support_.emplace_back(a.x, a.w.mat());
  if (ac_)
    for (std::size_t i = 0; i < ac_->nodes.size(); ++i)
      support_.emplace_back(ac_->nodes[i], ac_->densities[i].mat() * ac_->quad_weights[i]);
}

HermitianMatrix MatrixMeasure::mass() const { return moment(*this, 0); }

bool MatrixMeasure::is_normalized(double tol) const {
  return (mass().mat() - eye(p_)).norm() <= tol;
}

bool MatrixPolynomial::is_monic(double tol) const {
  const auto& c = coeffs.back();
  return (c - eye(static_cast<int>(c.rows()))).norm() <= tol;
}

CMatrix MatrixPolynomial::eval(cplx z) const {
  CMatrix r = coeffs.back();
  for (int k = degree() - 1; k >= 0; --k) r = (r * z + coeffs[k]).eval();
  return r;
}

HermitianMatrix moment(const MatrixMeasure& s, int k) {
  if (k < 0) throw std::invalid_argument("moment: k must be >= 0");
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (const auto& [x, w] : s.support()) m += std::pow(x, k) * w;
  return HermitianMatrix(m);
}

CMatrix inner_product(const MatrixMeasure& s, const MatrixPolynomial& f, const MatrixPolynomial& g) {
  if (f.dim() != s.dim() || g.dim() != s.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  CMatrix r = CMatrix::Zero(s.dim(), s.dim());
  for (const auto& [x, w] : s.support()) r += f.eval(x).adjoint() * w * g.eval(x);
  return r;
}

MatrixMeasure kmk_measure(double kappa1, double kappa2, int p, int n_nodes) {
  if (n_nodes < 8) throw std::invalid_argument("kmk_measure: n_nodes must be >= 8");
  auto rule = kmk_rule(kmk_params(kappa1, kappa2), n_nodes);
  AcPart ac{rule.nodes, rule.weights, std::vector<HermitianMatrix>(rule.nodes.size(), HermitianMatrix::identity(p))};
  return MatrixMeasure(p, {}, std::move(ac));
}

MatrixMeasure arcsine_measure(int p, int n_nodes) {
  auto rule = arcsine_rule(n_nodes);
  AcPart ac{rule.nodes, rule.weights, std::vector<HermitianMatrix>(rule.nodes.size(), HermitianMatrix::identity(p))};
  return MatrixMeasure(p, {}, std::move(ac));
}

MatrixMeasure pushforward(const MatrixMeasure& m, double c, double s) {
  std::vector<Atom> atoms;
  for (const auto& a : m.atoms()) atoms.push_back({c + s * a.x, a.w});
  std::optional<AcPart> ac;
  if (m.ac()) {
    ac = *m.ac();
    for (auto& x : ac->nodes) x = c + s * x;
  }
  return MatrixMeasure(m.dim(), std::move(atoms), std::move(ac));
}

}  // namespace canomat
