#pragma once

#include <string>
#include <vector>

#include "canomat/canonical.hpp"
#include "canomat/hermitian.hpp"
#include "canomat/measure.hpp"
#include "canomat/moment_chain.hpp"

namespace canomat {

// Hermitian Verblunsky coefficients alpha_0..alpha_{m-1} with
// rho_j = (1 - alpha_j^2)^{1/2} and kappa_0 = 1, kappa_{k+1} = kappa_k rho_k^{-1}.
struct VerblunskySeq {
  int p = 1;
  std::vector<HermitianMatrix> alpha;
  std::vector<HermitianMatrix> rho;
  std::vector<CMatrix> kappa;  // kappa[k], k = 0..m

  int size() const { return static_cast<int>(alpha.size()); }
  // kappa_k alpha_k kappa_k^{-1}
  CMatrix conjugated(int k) const;
  // 1 - kappa_{2n-1} alpha_{2n-1} kappa_{2n-1}^{-1}
  CMatrix tau(int n) const;
};

VerblunskySeq make_verblunsky(std::vector<HermitianMatrix> alpha);

// alpha_n = 2 U_herm_{n+1} - 1, n = 0..m-1.
VerblunskySeq verblunsky_from_canonical(const CanonicalChain& canon);

// Verblunsky coefficients of the symmetric circle measure whose Szego image is the
// pushforward of the [0,1] measure under x -> 2 - 4x: alpha_j = 2 V_{j+1} - 1 where V
// are the nested Hermitian canonical moments of the reflected measure (x -> 1 - x).
// A depth-n chain yields alpha_0..alpha_{2n-2}.
VerblunskySeq szego_verblunsky(const RecursionChain& chain01);

struct PhiPair {
  CMatrix at_z;      // Phi_k(z)
  CMatrix at_zinv;   // Phi_k(1/z)
};

// Monic OPUC by Phi_{k+1}(z) = z Phi_k(z) - z^k Phi_k(1/z) kappa_k alpha_k kappa_k^{-1},
// tracking Phi_k(z) and Phi_k(1/z) jointly.
PhiPair szego_phi_pair(const VerblunskySeq& a, int k, cplx z);
CMatrix szego_phi(const VerblunskySeq& a, int k, cplx z);

struct IdentityReport {
  std::string name;
  cplx lhs;
  cplx rhs;
  double residual = 0.0;  // see each check for the normalization
  double tol = 0.0;
  bool pass = false;
};

// x -> 2 - 4x on the chain, so J^ = 2 - 4 Omega J Omega.
RecursionChain jacobi_chain_transform(const RecursionChain& chain01);

// Determinant identities for a depth-n measure on (0,1). Residuals are relative
// |lhs - rhs| / |lhs|. Reports (a)-(d) plus the Verblunsky-product forms.
std::vector<IdentityReport> check_det_identities(const MatrixMeasure& s, int n, double tol = 1e-8);
std::vector<IdentityReport> check_det_identities(const RecursionChain& chain, const CanonicalChain& canon,
                                                 double tol = 1e-8);

// phi_1 = 1 - u_0, phi_k = 1 - u_{k-1} - phi_{k-1}^{-1} v_{k-1} against
// (1 - U_{2k-2})(1 - U_{2k-1}); residual is the absolute Frobenius norm.
std::vector<IdentityReport> check_schur_recursion(const RecursionChain& chain, const CanonicalChain& canon,
                                                  double tol = 1e-9);

// P^_n(z + 1/z) = [z^{-n} Phi_{2n}(z) + z^n Phi_{2n}(1/z)] tau_n^{-1}. The residual is the
// max over z of ||lhs - rhs||_F / (1 + ||lhs||_F); lhs/rhs fields hold det values at the
// worst point.
IdentityReport check_ym(const RecursionChain& chain01, int n, const std::vector<cplx>& z_samples,
                        double tol = 1e-7);
// Same, for a measure given on [-2, 2] (pulled back by x -> (2 - x)/4).
IdentityReport check_ym(const MatrixMeasure& sigma_R, int n, const std::vector<cplx>& z_samples,
                        double tol = 1e-7);

// 8th roots of unity (includes +-1).
std::vector<cplx> default_z_samples();

}  // namespace canomat
