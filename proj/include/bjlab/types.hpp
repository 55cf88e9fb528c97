#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bjlab {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Base of every error the library raises; `code` is a short machine-readable tag.
class LabError : public std::runtime_error {
 public:
  LabError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class DimensionError : public LabError {
 public:
  explicit DimensionError(const std::string& what) : LabError("dimension", what) {}
};

class PreconditionError : public LabError {
 public:
  PreconditionError(std::string code, const std::string& what)
      : LabError(std::move(code), what) {}
};

/// Raised when two independent numerical routes disagree beyond tolerance.
class InconsistentError : public LabError {
 public:
  explicit InconsistentError(const std::string& what) : LabError("inconsistent", what) {}
};

/// Unimodular phase of z, 1 for z == 0.
inline cplx phase_of(cplx z) {
  const double a = std::abs(z);
  return a == 0.0 ? cplx(1.0, 0.0) : z / a;
}

}  // namespace bjlab
