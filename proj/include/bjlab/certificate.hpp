#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bjlab/types.hpp"

namespace bjlab {

/// Outcome of a numerical check: verdict, headline value, witnesses and residuals.
///
/// `value` is the quantity the verdict was decided on (a defect, a margin, a
/// residual). Witnesses are the vectors that reproduce it.
struct Certificate {
  std::string check;
  std::string verdict;
  double value = 0.0;
  std::vector<CVector> witnesses;
  std::vector<double> residuals;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string note;

  bool passed(const std::string& good) const { return verdict == good; }
};

enum class NormVerdict { norm, semi_norm, violation };

std::string to_string(NormVerdict v);

/// Result of deciding whether A_T(x) = sqrt(|x|^2 - |Tx|^2) is a norm.
struct NormCertificate {
  std::string id;
  NormVerdict verdict = NormVerdict::violation;
  double margin = 0.0;              // min of A(x)+A(y)-A(x+y) over the search
  CVector witness_x, witness_y;     // set for violation
  CVector positivity_witness;       // set for semi_norm
  double min_on_sphere = 0.0;       // min of A_T over unit vectors
  CMatrix op;                       // the operator the verdict is about
  std::uint64_t seed = 0;
  int trials = 0;
};

nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NormCertificate& c);

}  // namespace bjlab
