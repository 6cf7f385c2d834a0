#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>

#include "canomat/errors.hpp"

namespace canomat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Positive-definiteness floor shared by all modules.
inline constexpr double eps_pd = 1e-12;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// p x p complex Hermitian value. Construction symmetrizes (A + A^*)/2, so the
// stored entries are exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& a);

  static HermitianMatrix identity(int p);
  static HermitianMatrix zero(int p);
  static HermitianMatrix scalar(int p, double c);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& mat() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }
  double norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix operator-() const;

 private:
  CMatrix m_;
};

HermitianMatrix operator*(double s, const HermitianMatrix& a);

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;  // ascending
  CMatrix eigenvectors;         // unitary, columns are eigenvectors
};

// Throws NonConvergence on non-finite input or solver failure.
EigenDecomposition herm_eigen(const HermitianMatrix& a);
Eigen::VectorXd eigenvalues(const HermitianMatrix& a);
double min_eig(const HermitianMatrix& a);
double max_eig(const HermitianMatrix& a);

// V f(L) V^*. Every eigenvalue must exceed `floor`, otherwise SpectrumOutOfDomain.
HermitianMatrix matrix_function(const HermitianMatrix& a, const std::function<double(double)>& f,
                                double floor = -inf);

HermitianMatrix pd_sqrt(const HermitianMatrix& a);
HermitianMatrix pd_inv_sqrt(const HermitianMatrix& a);
HermitianMatrix pd_log(const HermitianMatrix& a);

// A^t for PD A with a scale-free check: min eig must exceed eps_pd * max eig.
// Used for gamma_k and R_k, whose overall size decays geometrically with k.
HermitianMatrix pd_power_scaled(const HermitianMatrix& a, double t);

double logdet_pd(const HermitianMatrix& a);

bool loewner_strictly_between(const HermitianMatrix& a, const HermitianMatrix& lo,
                              const HermitianMatrix& hi, double margin);

// Convenience for non-Hermitian intermediates.
inline CMatrix eye(int p) { return CMatrix::Identity(p, p); }
inline CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

}  // namespace canomat
