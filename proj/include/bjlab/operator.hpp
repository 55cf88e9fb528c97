#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bjlab/space.hpp"

namespace bjlab {

/// T = diag(values).
struct DiagonalTag {
  CVector values;
};

/// Column j sends e_j to coeffs[j] * e_{targets[j]}. A negative target means
/// T e_j = 0; a target >= dim means the image leaves the truncation window
/// (the matrix column is zero, the model operator continues past the window).
struct MonomialTag {
  std::vector<int> targets;
  CVector coeffs;
};

/// T z = scale * f_x(z) * y with f_x the support functional of x.
struct RankOneTag {
  CVector x, y;
  cplx scale{1.0, 0.0};
};

/// Block shift on BlockSeq / BiBlockSeq by `step` blocks (+1 forward, -1 backward).
struct ShiftTag {
  int step = 1;
};

using Annotation = std::variant<std::monostate, DiagonalTag, MonomialTag, RankOneTag, ShiftTag>;

/// Dense operator between two spaces, optionally carrying the structure it was built from.
class Operator {
 public:
  Operator(CMatrix entries, Space domain, Space codomain, Annotation tag = {});
  Operator(CMatrix entries, const Space& space, Annotation tag = {})
      : Operator(std::move(entries), space, space, std::move(tag)) {}

  const CMatrix& matrix() const { return m_; }
  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  const Annotation& annotation() const { return tag_; }
  bool square() const { return domain_.same_as(codomain_); }

  /// Norm of the intended infinite model, when the truncation is smaller.
  std::optional<double> model_norm;

  CVector operator()(const CVector& x) const;
  Operator compose(const Operator& inner) const;  // this * inner
  Operator power(int k) const;
  Operator scaled(cplx a) const;

  nlohmann::json to_json() const;
  static Operator from_json(const nlohmann::json& j);

 private:
  CMatrix m_;
  Space domain_, codomain_;
  Annotation tag_;
};

Operator identity(const Space& space);
Operator diagonal(const Space& space, const CVector& values);
Operator monomial(const Space& space, const std::vector<int>& targets, const CVector& coeffs);
/// T z = scale * f_x(z) y; needs the support functional of x to exist.
Operator rank_one(const Space& space, const CVector& x, const CVector& y, cplx scale = 1.0);

/// Matrix a tag describes on a space of dimension n (before validation).
CMatrix tag_matrix(const Annotation& tag, const Space& domain, const Space& codomain);

}  // namespace bjlab
