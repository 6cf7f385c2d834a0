#pragma once

#include <vector>

#include "canomat/hermitian.hpp"
#include "canomat/moment_chain.hpp"

namespace canomat {

// Canonical-moment data of a normalized measure on [0, 1]; entry [k-1] holds index k,
// k = 1..m with m = 2n - 1 for a depth-n chain.
struct CanonicalChain {
  int p = 1;
  int m = 0;
  std::vector<CMatrix> zeta;
  std::vector<CMatrix> U;               // similar to Hermitian, not Hermitian itself
  std::vector<HermitianMatrix> U_herm;  // R^{-1/2} H R^{-1/2}
  std::vector<HermitianMatrix> R;
  std::vector<HermitianMatrix> H;
  std::vector<HermitianMatrix> M_minus;
  std::vector<HermitianMatrix> M_plus;
};

// zeta-inversion of the monic recursion. Requires gamma_0 = identity.
// Throws BoundaryDegeneracy(k) when U_herm_k is not strictly inside (0, 1).
CanonicalChain canonical_from_recursion(const RecursionChain& chain);

RecursionChain canonical_to_recursion(const CanonicalChain& canon);

// Rebuilds U, R, H, zeta and the moment bounds from Hermitian canonical moments
// (odd count m = 2n - 1).
CanonicalChain canonical_from_hermitian(const std::vector<HermitianMatrix>& U_herm);

// R_k^{-1/2} H_k R_k^{-1/2}, k 1-based.
HermitianMatrix hermitian_canonical_direct(const CanonicalChain& canon, int k);

// Hermitian version built with the product square root S_1 = 1,
// S_k = S_{k-1} (V_{k-1}(1 - V_{k-1}))^{1/2}, V_k = S_k^{-1} H_k S_k^{-*}.
// S_k S_k^* = R_k, so V_k is unitarily similar to U_herm_k. This is the version
// whose affine image gives the Verblunsky coefficients of the Szego preimage.
std::vector<HermitianMatrix> nested_hermitian_canonical(const CanonicalChain& canon);

}  // namespace canomat
