#include "canomat/canonical.hpp"

#include <stdexcept>
#include <string>

namespace canomat {

namespace {

void check_inside(const HermitianMatrix& uh, int k) {
  const int p = uh.dim();
  if (!loewner_strictly_between(uh, HermitianMatrix::zero(p), HermitianMatrix::identity(p), eps_pd))
    throw BoundaryDegeneracy("canonical moment " + std::to_string(k) + " not strictly inside (0,1)", k);
}

HermitianMatrix herm_from_RH(const HermitianMatrix& R, const HermitianMatrix& H, int k) {
  try {
    CMatrix ris = pd_power_scaled(R, -0.5).mat();
    return HermitianMatrix(ris * H.mat() * ris);
  } catch (const SpectrumOutOfDomain&) {
    throw BoundaryDegeneracy("R_" + std::to_string(k) + " lost positive definiteness", k);
  }
}

void fill_moment_bounds(CanonicalChain& c, const RecursionChain& chain) {
  auto M = jacobi_moments(build_block_jacobi(chain), c.m);
  c.M_minus.clear();
  c.M_plus.clear();
  for (int k = 1; k <= c.m; ++k) {
    c.M_minus.push_back(M[k] - c.H[k - 1]);
    c.M_plus.push_back(c.M_minus.back() + c.R[k - 1]);
  }
}

}  // namespace

CanonicalChain canonical_from_recursion(const RecursionChain& chain) {
  const int p = chain.p, n = chain.depth;
  if ((chain.gamma[0].mat() - eye(p)).norm() > 1e-8)
    throw std::invalid_argument("canonical_from_recursion: measure must be normalized");
  CanonicalChain c;
  c.p = p;
  c.m = 2 * n - 1;
  const CMatrix I = eye(p);
  for (int k = 1; k <= c.m; ++k) {
    CMatrix z;
    if (k == 1) {
      z = chain.u[0];
    } else if (k % 2 == 0) {
      z = c.zeta[k - 2].partialPivLu().solve(chain.v[k / 2 - 1]);
    } else {
      z = chain.u[(k - 1) / 2] - c.zeta[k - 2];
    }
    c.zeta.push_back(z);

    HermitianMatrix R = HermitianMatrix::identity(p);
    CMatrix U = z;
    if (k > 1) {
      const CMatrix& Up = c.U[k - 2];
      U = (I - Up).partialPivLu().solve(z);
      R = HermitianMatrix(c.R[k - 2].mat() * (I - Up) * Up);
    }
    HermitianMatrix H(R.mat() * U);
    HermitianMatrix uh = herm_from_RH(R, H, k);
    check_inside(uh, k);
    c.U.push_back(U);
    c.R.push_back(R);
    c.H.push_back(H);
    c.U_herm.push_back(uh);
  }
  fill_moment_bounds(c, chain);
  return c;
}

RecursionChain canonical_to_recursion(const CanonicalChain& canon) {
  const int p = canon.p, m = canon.m;
  const int n = (m + 1) / 2;
  const CMatrix I = eye(p);
  for (int k = 1; k <= m; ++k) check_inside(canon.U_herm[k - 1], k);
  std::vector<CMatrix> z(m + 1);
  z[1] = canon.U[0];
  for (int k = 2; k <= m; ++k) z[k] = (I - canon.U[k - 2]) * canon.U[k - 1];
  std::vector<CMatrix> u{z[1]}, v;
  for (int k = 1; k < n; ++k) {
    u.push_back(z[2 * k + 1] + z[2 * k]);
    v.push_back(z[2 * k - 1] * z[2 * k]);
  }
  return chain_from_monic(HermitianMatrix::identity(p), std::move(u), std::move(v));
}

CanonicalChain canonical_from_hermitian(const std::vector<HermitianMatrix>& U_herm) {
  const int m = static_cast<int>(U_herm.size());
  if (m < 1 || m % 2 == 0) throw std::invalid_argument("canonical_from_hermitian: need odd length");
  const int p = U_herm[0].dim();
  const CMatrix I = eye(p);
  CanonicalChain c;
  c.p = p;
  c.m = m;
  for (int k = 1; k <= m; ++k) {
    check_inside(U_herm[k - 1], k);
    HermitianMatrix R = HermitianMatrix::identity(p);
    if (k > 1) R = HermitianMatrix(c.R[k - 2].mat() * (I - c.U[k - 2]) * c.U[k - 2]);
    CMatrix U = pd_power_scaled(R, -0.5).mat() * U_herm[k - 1].mat() * pd_power_scaled(R, 0.5).mat();
    c.zeta.push_back(k == 1 ? U : CMatrix((I - c.U[k - 2]) * U));
    c.U.push_back(U);
    c.R.push_back(R);
    c.H.emplace_back(R.mat() * U);
    c.U_herm.push_back(U_herm[k - 1]);
  }
  fill_moment_bounds(c, canonical_to_recursion(c));
  return c;
}

HermitianMatrix hermitian_canonical_direct(const CanonicalChain& canon, int k) {
  if (k < 1 || k > canon.m) throw std::invalid_argument("hermitian_canonical_direct: index out of range");
  CMatrix ris = pd_power_scaled(canon.R[k - 1], -0.5).mat();
  return HermitianMatrix(ris * canon.H[k - 1].mat() * ris);
}

std::vector<HermitianMatrix> nested_hermitian_canonical(const CanonicalChain& canon) {
  const int p = canon.p;
  const CMatrix I = eye(p);
  std::vector<HermitianMatrix> out;
  CMatrix S = I;
  for (int k = 1; k <= canon.m; ++k) {
    if (k > 1) {
      const CMatrix& V = out.back().mat();
      S = (S * pd_power_scaled(HermitianMatrix(V * (I - V)), 0.5).mat()).eval();
    }
    Eigen::PartialPivLU<CMatrix> lu(S);
    CMatrix t = lu.solve(canon.H[k - 1].mat());                 // S^{-1} H
    out.emplace_back(lu.solve(t.adjoint()).adjoint());          // S^{-1} H S^{-*}
  }
  return out;
}

}  // namespace canomat
