#pragma once

#include <stdexcept>
#include <string>

namespace canomat {

// Base of all numeric failures. The CLI maps these to exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigen solver failed, typically on NaN/Inf input.
struct NonConvergence : NumericError {
  using NumericError::NumericError;
};

// An eigenvalue fell outside the domain of a matrix function.
struct SpectrumOutOfDomain : NumericError {
  double eigenvalue;
  SpectrumOutOfDomain(const std::string& what, double ev) : NumericError(what), eigenvalue(ev) {}
};

// gamma_k lost positive definiteness during orthogonalization.
struct TrivialityBreakdown : NumericError {
  int index;
  TrivialityBreakdown(const std::string& what, int k) : NumericError(what), index(k) {}
};

// A canonical moment reached the boundary 0 or 1 (or an inversion became singular).
struct BoundaryDegeneracy : NumericError {
  int index;
  BoundaryDegeneracy(const std::string& what, int k) : NumericError(what), index(k) {}
};

}  // namespace canomat
