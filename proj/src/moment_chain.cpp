#include "canomat/moment_chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace canomat {

namespace {

using Values = std::vector<CMatrix>;  // polynomial values at the support points

CMatrix ip(const MatrixMeasure& s, const Values& f, const Values& g) {
  const auto& sup = s.support();
  CMatrix r = CMatrix::Zero(s.dim(), s.dim());
  for (std::size_t i = 0; i < sup.size(); ++i) r.noalias() += f[i].adjoint() * sup[i].second * g[i];
  return r;
}

void check_pd(const HermitianMatrix& g, double scale, int k) {
  auto l = eigenvalues(g);
  if (!(l(0) > eps_pd * scale) || !(l(0) > 0))
    throw TrivialityBreakdown("gram_schmidt: gamma_" + std::to_string(k) + " not positive definite (min eig " +
                                  std::to_string(l(0)) + ")",
                              k);
}

}  // namespace

RecursionChain gram_schmidt(const MatrixMeasure& s, int n) {
  if (n < 1) throw std::invalid_argument("gram_schmidt: depth must be >= 1");
  const int p = s.dim();
  const auto& sup = s.support();
  const std::size_t N = sup.size();

  std::vector<Values> P;
  P.emplace_back(N, eye(p));

  RecursionChain c;
  c.p = p;
  c.depth = n;
  HermitianMatrix g0(ip(s, P[0], P[0]));
  check_pd(g0, max_eig(g0), 0);
  c.gamma.push_back(g0);

  for (int k = 0; k < n; ++k) {
    const Values& Pk = P[k];
    Values XP(N);
    for (std::size_t i = 0; i < N; ++i) XP[i] = sup[i].first * Pk[i];
    const HermitianMatrix& gk = c.gamma[k];
    Eigen::LLT<CMatrix> llt(gk.mat());
    CMatrix cxx = ip(s, Pk, XP);
    c.u.push_back(llt.solve(cxx));
    HermitianMatrix gis = pd_power_scaled(gk, -0.5);
    c.B.emplace_back(gis.mat() * cxx * gis.mat());
    if (k == n - 1) break;

    Values Pn(N);
    for (std::size_t i = 0; i < N; ++i) {
      Pn[i] = XP[i] - Pk[i] * c.u[k];
      if (k > 0) Pn[i] -= P[k - 1][i] * c.v[k - 1];
    }
    for (int j = 0; j <= k; ++j) {
      CMatrix coef = Eigen::LLT<CMatrix>(c.gamma[j].mat()).solve(ip(s, P[j], Pn));
      for (std::size_t i = 0; i < N; ++i) Pn[i] -= P[j][i] * coef;
    }
    HermitianMatrix gn(ip(s, Pn, Pn));
    check_pd(gn, max_eig(HermitianMatrix(ip(s, XP, XP))), k + 1);
    c.v.push_back(llt.solve(gn.mat()));
    c.gamma.push_back(gn);
    P.push_back(std::move(Pn));
  }

  for (int k = 1; k < n; ++k) {
    CMatrix at = pd_power_scaled(c.gamma[k - 1], -0.5).mat() * pd_power_scaled(c.gamma[k], 0.5).mat();
    c.A_tilde.push_back(at);
    c.A.emplace_back(at * at.adjoint());
  }
  return c;
}

RecursionChain chain_from_monic(const HermitianMatrix& gamma0, std::vector<CMatrix> u, std::vector<CMatrix> v) {
  const int n = static_cast<int>(u.size());
  if (n < 1 || static_cast<int>(v.size()) != n - 1)
    throw std::invalid_argument("chain_from_monic: need n u's and n-1 v's");
  RecursionChain c;
  c.p = gamma0.dim();
  c.depth = n;
  c.u = std::move(u);
  c.v = std::move(v);
  c.gamma.push_back(gamma0);
  for (int k = 1; k < n; ++k) c.gamma.emplace_back(c.gamma[k - 1].mat() * c.v[k - 1]);
  for (int k = 0; k < n; ++k) {
    c.B.emplace_back(pd_power_scaled(c.gamma[k], 0.5).mat() * c.u[k] * pd_power_scaled(c.gamma[k], -0.5).mat());
  }
  for (int k = 1; k < n; ++k) {
    CMatrix at = pd_power_scaled(c.gamma[k - 1], -0.5).mat() * pd_power_scaled(c.gamma[k], 0.5).mat();
    c.A_tilde.push_back(at);
    c.A.emplace_back(at * at.adjoint());
  }
  return c;
}

double chain_consistency_residual(const RecursionChain& c) {
  double r = 0.0;
  auto rel = [](const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(1.0, b.norm()); };
  for (int k = 0; k < c.depth; ++k) {
    CMatrix b = pd_power_scaled(c.gamma[k], 0.5).mat() * c.u[k] * pd_power_scaled(c.gamma[k], -0.5).mat();
    r = std::max(r, rel(b, c.B[k].mat()));
  }
  for (int k = 1; k < c.depth; ++k) {
    r = std::max(r, rel(c.A_tilde[k - 1] * c.A_tilde[k - 1].adjoint(), c.A[k - 1].mat()));
    CMatrix v = Eigen::LLT<CMatrix>(c.gamma[k - 1].mat()).solve(c.gamma[k].mat());
    r = std::max(r, rel(v, c.v[k - 1]));
  }
  return r;
}

double orthogonality_residual(const MatrixMeasure& s, const RecursionChain& c) {
  const auto& sup = s.support();
  std::vector<Values> P(c.depth + 1, Values(sup.size()));
  for (std::size_t i = 0; i < sup.size(); ++i)
    for (int k = 0; k <= c.depth; ++k) P[k][i] = eval_monic_op(c, k, sup[i].first);
  double scale = 0.0;
  for (const auto& g : c.gamma) scale = std::max(scale, g.norm());
  double r = 0.0;
  for (int k = 1; k <= c.depth; ++k)
    for (int j = 0; j < k; ++j) r = std::max(r, ip(s, P[j], P[k]).norm());
  return r / scale;
}

RecursionChain affine_pushforward(const RecursionChain& c, double shift, double scale) {
  RecursionChain o = c;
  const int p = c.p;
  for (int k = 0; k < c.depth; ++k) {
    o.u[k] = shift * eye(p) + scale * c.u[k];
    o.gamma[k] = c.gamma[k] * std::pow(scale, 2 * k);
    o.B[k] = HermitianMatrix(shift * eye(p) + scale * c.B[k].mat());
  }
  for (int k = 0; k + 1 < c.depth; ++k) {
    o.v[k] = scale * scale * c.v[k];
    o.A_tilde[k] = std::abs(scale) * c.A_tilde[k];
    o.A[k] = c.A[k] * (scale * scale);
  }
  return o;
}

BlockJacobi build_block_jacobi(const RecursionChain& c) {
  if (c.depth < 1) throw std::invalid_argument("build_block_jacobi: empty chain");
  const int p = c.p, n = c.depth;
  CMatrix J = CMatrix::Zero(n * p, n * p);
  for (int k = 0; k < n; ++k) {
    J.block(k * p, k * p, p, p) = c.B[k].mat();
    if (k + 1 < n) {
      J.block(k * p, (k + 1) * p, p, p) = c.A_tilde[k];
      J.block((k + 1) * p, k * p, p, p) = c.A_tilde[k].adjoint();
    }
  }
  return {p, n, HermitianMatrix(J)};
}

MatrixMeasure spectral_measure(const HermitianMatrix& J, int p) {
  if (p < 1 || J.dim() % p != 0) throw std::invalid_argument("spectral_measure: size not divisible by p");
  auto ed = herm_eigen(J);
  std::vector<Atom> atoms;
  const int N = J.dim();
  int i = 0;
  while (i < N) {
    int j = i;
    double sum = 0.0;
    CMatrix w = CMatrix::Zero(p, p);
    while (j < N && (j == i || ed.eigenvalues(j) - ed.eigenvalues(j - 1) < 1e-10)) {
      CVector v = ed.eigenvectors.col(j).head(p);
      w += v * v.adjoint();
      sum += ed.eigenvalues(j);
      ++j;
    }
    atoms.push_back({sum / (j - i), HermitianMatrix(w)});
    i = j;
  }
  return MatrixMeasure(p, std::move(atoms));
}

CMatrix eval_monic_op(const RecursionChain& c, int k, cplx z) {
  if (k < 0 || k > c.depth) throw std::invalid_argument("eval_monic_op: degree out of range");
  CMatrix prev = CMatrix::Zero(c.p, c.p);
  CMatrix cur = eye(c.p);
  for (int j = 0; j < k; ++j) {
    CMatrix next = z * cur - cur * c.u[j];
    if (j > 0) next -= prev * c.v[j - 1];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<HermitianMatrix> jacobi_moments(const BlockJacobi& bj, int kmax) {
  const int p = bj.p;
  CMatrix Y = CMatrix::Identity(bj.J.dim(), p);
  std::vector<HermitianMatrix> m;
  m.emplace_back(Y.topRows(p));
  for (int k = 1; k <= kmax; ++k) {
    Y = (bj.J.mat() * Y).eval();
    m.emplace_back(Y.topRows(p));
  }
  return m;
}

}  // namespace canomat
