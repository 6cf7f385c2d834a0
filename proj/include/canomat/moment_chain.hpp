#pragma once

#include <vector>

#include "canomat/hermitian.hpp"
#include "canomat/measure.hpp"

namespace canomat {

// Three-term recursion data of the monic and orthonormal matrix OPs.
// Indexing (0-based containers):
//   gamma[k] = gamma_k, u[k] = u_k          for k = 0..n-1
//   v[k-1]   = v_k                          for k = 1..n-1
//   B[k-1]   = B_k                          for k = 1..n
//   A_tilde[k-1] = A~_k, A[k-1] = A_k       for k = 1..n-1
struct RecursionChain {
  int p = 1;
  int depth = 0;
  std::vector<HermitianMatrix> gamma;
  std::vector<CMatrix> u;
  std::vector<CMatrix> v;
  std::vector<HermitianMatrix> B;
  std::vector<CMatrix> A_tilde;
  std::vector<HermitianMatrix> A;
};

struct BlockJacobi {
  int p = 1;
  int n = 0;
  HermitianMatrix J;
};

// Discretized Stieltjes procedure on the support points of the measure, with one
// full reorthogonalization pass per step. Throws TrivialityBreakdown(k) when gamma_k
// is not PD relative to the scale of <<x P_{k-1}, x P_{k-1}>>.
RecursionChain gram_schmidt(const MatrixMeasure& s, int n);

// Completes B, A~, A from gamma_0 and the monic coefficients.
RecursionChain chain_from_monic(const HermitianMatrix& gamma0, std::vector<CMatrix> u, std::vector<CMatrix> v);

// Max deviation among B_{k+1} = gamma_k^{1/2} u_k gamma_k^{-1/2}, A_k = A~_k A~_k^*,
// v_k = gamma_{k-1}^{-1} gamma_k (Frobenius, relative to block size).
double chain_consistency_residual(const RecursionChain& c);

// max_{j<k<=n} ||<<P_j, P_k>>||_F / max_k ||gamma_k||_F on the given measure.
double orthogonality_residual(const MatrixMeasure& s, const RecursionChain& c);

// Chain of the image measure under x -> shift + scale * x.
RecursionChain affine_pushforward(const RecursionChain& c, double shift, double scale);

BlockJacobi build_block_jacobi(const RecursionChain& c);

// Atoms at eigenvalues of J with weights v v^* (v = first p coordinates of the unit
// eigenvector); eigenvalues closer than 1e-10 are merged.
MatrixMeasure spectral_measure(const HermitianMatrix& J, int p);

// Monic P_k(z) by forward recursion.
CMatrix eval_monic_op(const RecursionChain& c, int k, cplx z);

// Top-left p x p block of J^k, k = 0..kmax.
std::vector<HermitianMatrix> jacobi_moments(const BlockJacobi& bj, int kmax);

}  // namespace canomat
