#include "canomat/identities.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace canomat {

namespace {

double herm_det(const HermitianMatrix& a) { return eigenvalues(a).prod(); }

IdentityReport make_report(std::string name, cplx lhs, cplx rhs, double tol) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
  r.tol = tol;
  r.pass = r.residual < tol;
  return r;
}

}  // namespace

CMatrix VerblunskySeq::conjugated(int k) const {
  return kappa[k] * alpha[k].mat() * kappa[k].inverse();
}

CMatrix VerblunskySeq::tau(int n) const { return eye(p) - conjugated(2 * n - 1); }

VerblunskySeq make_verblunsky(std::vector<HermitianMatrix> alpha) {
  if (alpha.empty()) throw std::invalid_argument("make_verblunsky: empty sequence");
  VerblunskySeq s;
  s.p = alpha[0].dim();
  const auto one = HermitianMatrix::identity(s.p);
  s.kappa.push_back(eye(s.p));
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!loewner_strictly_between(alpha[k], -one, one, eps_pd))
      throw BoundaryDegeneracy("Verblunsky coefficient " + std::to_string(k) + " not inside (-1,1)",
                               static_cast<int>(k));
    HermitianMatrix rho = pd_sqrt(HermitianMatrix(eye(s.p) - alpha[k].mat() * alpha[k].mat()));
    s.kappa.push_back(s.kappa.back() * rho.mat().inverse());
    s.rho.push_back(rho);
  }
  s.alpha = std::move(alpha);
  return s;
}

VerblunskySeq verblunsky_from_canonical(const CanonicalChain& canon) {
  std::vector<HermitianMatrix> a;
  for (const auto& u : canon.U_herm) a.emplace_back(2.0 * u.mat() - eye(canon.p));
  return make_verblunsky(std::move(a));
}

VerblunskySeq szego_verblunsky(const RecursionChain& chain01) {
  auto canon = canonical_from_recursion(affine_pushforward(chain01, 1.0, -1.0));
  std::vector<HermitianMatrix> a;
  for (const auto& v : nested_hermitian_canonical(canon)) a.emplace_back(2.0 * v.mat() - eye(canon.p));
  return make_verblunsky(std::move(a));
}

PhiPair szego_phi_pair(const VerblunskySeq& a, int k, cplx z) {
  if (k < 0 || k > a.size()) throw std::invalid_argument("szego_phi: degree out of range");
  CMatrix F = eye(a.p), G = eye(a.p);
  for (int j = 0; j < k; ++j) {
    CMatrix c = a.conjugated(j);
    cplx zj = std::pow(z, j);
    CMatrix Fn = z * F - zj * G * c;
    CMatrix Gn = G / z - F * c / zj;
    F = std::move(Fn);
    G = std::move(Gn);
  }
  return {F, G};
}

CMatrix szego_phi(const VerblunskySeq& a, int k, cplx z) { return szego_phi_pair(a, k, z).at_z; }

RecursionChain jacobi_chain_transform(const RecursionChain& chain01) {
  return affine_pushforward(chain01, 2.0, -4.0);
}

std::vector<IdentityReport> check_det_identities(const MatrixMeasure& s, int n, double tol) {
  auto chain = gram_schmidt(s, n);
  return check_det_identities(chain, canonical_from_recursion(chain), tol);
}

std::vector<IdentityReport> check_det_identities(const RecursionChain& chain, const CanonicalChain& canon,
                                                 double tol) {
  const int n = chain.depth, p = chain.p;
  auto bj = build_block_jacobi(chain);
  const CMatrix& J = bj.J.mat();
  const CMatrix I = CMatrix::Identity(J.rows(), J.cols());
  auto lam = eigenvalues(bj.J);
  cplx detJ = J.partialPivLu().determinant();
  cplx detIJ = (I - J).partialPivLu().determinant();
  double prod_l = lam.prod();
  double prod_1l = (1.0 - lam.array()).prod();

  double c_odd_even = 1.0, c_all = 1.0;
  const auto one = HermitianMatrix::identity(p);
  for (int k = 1; k <= 2 * n - 1; ++k) {
    const auto& u = canon.U_herm[k - 1];
    c_all *= herm_det(one - u);
    c_odd_even *= (k % 2 == 1) ? herm_det(u) : herm_det(one - u);
  }

  std::vector<IdentityReport> out;
  out.push_back(make_report("det_J_eigen", detJ, prod_l, tol));
  out.push_back(make_report("det_I_minus_J_eigen", detIJ, prod_1l, tol));
  out.push_back(make_report("det_J_canonical", detJ, c_odd_even, tol));
  out.push_back(make_report("det_I_minus_J_canonical", detIJ, c_all, tol));

  // second route through the Szego bridge
  auto al = szego_verblunsky(chain);
  const double scale = std::pow(2.0, -(2.0 * n - 1.0) * p);
  double pm = scale, pp = scale;
  for (int j = 0; j <= 2 * n - 2; ++j) {
    const auto& a = al.alpha[j];
    pm *= herm_det(one - a);
    pp *= herm_det(j % 2 == 0 ? one + a : one - a);
  }
  out.push_back(make_report("det_J_verblunsky", detJ, pm, tol));
  out.push_back(make_report("det_I_minus_J_verblunsky", detIJ, pp, tol));

  std::vector<HermitianMatrix> ext(al.alpha.begin(), al.alpha.begin() + (2 * n - 1));
  ext.push_back(HermitianMatrix::zero(p));
  auto full = make_verblunsky(ext);
  cplx lhs = szego_phi(full, 2 * n, 1.0).partialPivLu().determinant();
  double rhs = 1.0;
  for (const auto& a : full.alpha) rhs *= herm_det(one - a);
  out.push_back(make_report("det_Phi_2n_at_1", lhs, rhs, tol));
  return out;
}

std::vector<IdentityReport> check_schur_recursion(const RecursionChain& chain, const CanonicalChain& canon,
                                                  double tol) {
  const int p = chain.p;
  const CMatrix I = eye(p);
  std::vector<IdentityReport> out;
  CMatrix phi;
  for (int k = 1; k <= chain.depth; ++k) {
    if (k == 1) {
      phi = I - chain.u[0];
    } else {
      Eigen::PartialPivLU<CMatrix> lu(phi);
      if (!(lu.rcond() > 1e-14))
        throw BoundaryDegeneracy("check_schur_recursion: phi_" + std::to_string(k - 1) + " singular", k - 1);
      phi = (I - chain.u[k - 1] - lu.solve(chain.v[k - 2])).eval();
    }
    CMatrix closed = (k == 1 ? I : CMatrix(I - canon.U[2 * k - 3])) * (I - canon.U[2 * k - 2]);
    IdentityReport r;
    r.name = "phi_" + std::to_string(k);
    r.lhs = phi.trace();
    r.rhs = closed.trace();
    r.residual = (phi - closed).norm();
    r.tol = tol;
    r.pass = r.residual < tol;
    out.push_back(r);
  }
  return out;
}

IdentityReport check_ym(const RecursionChain& chain01, int n, const std::vector<cplx>& z_samples, double tol) {
  if (n < 1 || n > chain01.depth) throw std::invalid_argument("check_ym: degree out of range");
  const int p = chain01.p;
  auto hat = jacobi_chain_transform(chain01);
  auto al = szego_verblunsky(chain01);
  std::vector<HermitianMatrix> ext(al.alpha.begin(), al.alpha.begin() + (2 * n - 1));
  ext.push_back(HermitianMatrix::zero(p));  // the identity does not depend on alpha_{2n-1}
  auto full = make_verblunsky(ext);
  Eigen::PartialPivLU<CMatrix> tau_lu(full.tau(n));
  if (!(tau_lu.rcond() > 1e-14)) throw BoundaryDegeneracy("check_ym: tau_n singular", 2 * n - 1);
  const CMatrix tau_inv = tau_lu.inverse();

  IdentityReport r;
  r.name = "ym_n" + std::to_string(n);
  r.tol = tol;
  r.residual = -1.0;
  for (cplx z : z_samples) {
    if (std::abs(z) < 1e-8) throw std::invalid_argument("check_ym: z too close to 0");
    CMatrix lhs = eval_monic_op(hat, n, z + 1.0 / z);
    auto ph = szego_phi_pair(full, 2 * n, z);
    CMatrix sum = std::pow(z, -n) * ph.at_z + std::pow(z, n) * ph.at_zinv;
    CMatrix rhs = sum * tau_inv;
    double res = (lhs - rhs).norm() / (1.0 + lhs.norm());
    if (res > r.residual) {
      r.residual = res;
      r.lhs = lhs.determinant();
      r.rhs = rhs.determinant();
    }
  }
  r.pass = r.residual < tol;
  return r;
}

IdentityReport check_ym(const MatrixMeasure& sigma_R, int n, const std::vector<cplx>& z_samples, double tol) {
  return check_ym(gram_schmidt(pushforward(sigma_R, 0.5, -0.25), n), n, z_samples, tol);
}

std::vector<cplx> default_z_samples() {
  std::vector<cplx> z;
  for (int k = 0; k < 8; ++k) z.push_back(std::polar(1.0, k * std::numbers::pi / 4.0));
  return z;
}

}  // namespace canomat
