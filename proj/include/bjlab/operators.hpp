#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bjlab/certificate.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

struct NormEstimate {
  double value = 0.0;
  bool exact = false;
  CVector witness;  // unit vector with |T witness| = value (empty for T = 0 or when unknown)
  std::string method;
};

/// Operator norm: closed forms where available, otherwise a multi-start lower bound.
NormEstimate operator_norm(const Operator& T, int restarts = 32, std::uint64_t seed = 1);

/// Local maximizers of |Tx| on the unit sphere from `restarts` starts, phase-normalized.
std::vector<CVector> sphere_maximizers(const Operator& T, int restarts, std::uint64_t seed);

/// A_T(x) = sqrt(|x|^2 - |Tx|^2). Throws "not a contraction" if the radicand is below -1e-9 |x|^2.
double a_T(const Operator& T, const CVector& x, int* clamp_events = nullptr);
/// Â_T(x) = sqrt(|T|^2 |x|^2 - |Tx|^2) for a given value of |T|.
double a_hat_T(const Operator& T, double norm_T, const CVector& x);

enum class ContractionClass { strict, G1, G2, not_contraction };
std::string to_string(ContractionClass c);

struct Classification {
  ContractionClass cls = ContractionClass::strict;
  Certificate cert;
};

/// strict / G1 / G2 / not-contraction. G1 needs a declared model norm: a truncation
/// whose model operator has norm 1 while no vector attains it in the window.
Classification classify_contraction(const Operator& T, std::uint64_t seed = 1);

struct AttainmentSet {
  double norm = 0.0;
  std::vector<CVector> witnesses;   // unit vectors attaining the norm
  Subspace guess;                   // span of the witnesses
  bool is_subspace = true;          // false when a unit vector of the span fails to attain
  CVector counterexample;           // that unit vector
  std::optional<Subspace> kernel;   // exact set from a defect representation
};

/// Norm attainment set. With `defect` (an operator A with |Ax| = A_{T/|T|}(x)) the
/// exact set ker A is computed and the sampled witnesses must lie in it.
AttainmentSet norm_attainment_set(const Operator& T, std::uint64_t seed = 1,
                                  const std::optional<Operator>& defect = std::nullopt);

/// T^x: transposed entries acting between the dual spaces.
Operator banach_adjoint(const Operator& T);

/// Norm-one left inverse of a shift-tagged or isometric monomial operator, verified.
Operator left_inverse(const Operator& V);

}  // namespace bjlab
