#include "canomat/hermitian.hpp"

#include <cmath>
#include <string>

namespace canomat {

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("HermitianMatrix: matrix not square");
  if (a.rows() < 1) throw std::invalid_argument("HermitianMatrix: dim must be >= 1");
  m_ = (a + a.adjoint()) * 0.5;
  for (int i = 0; i < m_.rows(); ++i) m_(i, i) = cplx(m_(i, i).real(), 0.0);
}

HermitianMatrix HermitianMatrix::identity(int p) { return HermitianMatrix(CMatrix::Identity(p, p)); }
HermitianMatrix HermitianMatrix::zero(int p) { return HermitianMatrix(CMatrix::Zero(p, p)); }
HermitianMatrix HermitianMatrix::scalar(int p, double c) {
  return HermitianMatrix(CMatrix::Identity(p, p) * c);
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
HermitianMatrix HermitianMatrix::operator*(double s) const { return HermitianMatrix(m_ * s); }
HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(-m_); }
HermitianMatrix operator*(double s, const HermitianMatrix& a) { return a * s; }

EigenDecomposition herm_eigen(const HermitianMatrix& a) {
  if (!a.mat().allFinite()) throw NonConvergence("herm_eigen: non-finite entries");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat());
  if (es.info() != Eigen::Success) throw NonConvergence("herm_eigen: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const HermitianMatrix& a) {
  if (!a.mat().allFinite()) throw NonConvergence("eigenvalues: non-finite entries");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NonConvergence("eigenvalues: solver did not converge");
  return es.eigenvalues();
}

double min_eig(const HermitianMatrix& a) { return eigenvalues(a)(0); }
double max_eig(const HermitianMatrix& a) {
  auto ev = eigenvalues(a);
  return ev(ev.size() - 1);
}

HermitianMatrix matrix_function(const HermitianMatrix& a, const std::function<double(double)>& f,
                                double floor) {
  auto ed = herm_eigen(a);
  Eigen::VectorXd fv(ed.eigenvalues.size());
  for (int i = 0; i < fv.size(); ++i) {
    double l = ed.eigenvalues(i);
    if (!(l > floor))
      throw SpectrumOutOfDomain("matrix_function: eigenvalue " + std::to_string(l) + " below floor", l);
    fv(i) = f(l);
  }
  const CMatrix& v = ed.eigenvectors;
  return HermitianMatrix(v * fv.cast<cplx>().asDiagonal() * v.adjoint());
}

HermitianMatrix pd_sqrt(const HermitianMatrix& a) {
  return matrix_function(a, [](double x) { return std::sqrt(x); }, eps_pd);
}
HermitianMatrix pd_inv_sqrt(const HermitianMatrix& a) {
  return matrix_function(a, [](double x) { return 1.0 / std::sqrt(x); }, eps_pd);
}
HermitianMatrix pd_log(const HermitianMatrix& a) {
  return matrix_function(a, [](double x) { return std::log(x); }, eps_pd);
}

HermitianMatrix pd_power_scaled(const HermitianMatrix& a, double t) {
  auto ed = herm_eigen(a);
  const auto& l = ed.eigenvalues;
  double top = l(l.size() - 1);
  if (!(top > 0) || !(l(0) > eps_pd * top))
    throw SpectrumOutOfDomain("pd_power_scaled: matrix not positive definite", l(0));
  Eigen::VectorXd fv = l.array().pow(t);
  return HermitianMatrix(ed.eigenvectors * fv.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint());
}

double logdet_pd(const HermitianMatrix& a) {
  auto l = eigenvalues(a);
  if (!(l(0) > eps_pd)) throw SpectrumOutOfDomain("logdet_pd: matrix not positive definite", l(0));
  return l.array().log().sum();
}

bool loewner_strictly_between(const HermitianMatrix& a, const HermitianMatrix& lo,
                              const HermitianMatrix& hi, double margin) {
  if (a.dim() != lo.dim() || a.dim() != hi.dim())
    throw std::invalid_argument("loewner_strictly_between: dimension mismatch");
  return min_eig(a - lo) > margin && min_eig(hi - a) > margin;
}

}  // namespace canomat
