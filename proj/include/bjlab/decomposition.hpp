#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bjlab/certificate.hpp"
#include "bjlab/dilation.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

/// {x : |T^n x| = |x|} truncated at nmax.
struct IsometrySet {
  Subspace space;
  bool is_subspace = true;
  CVector counterexample;      // unit vector of `space` where the identity fails
  std::string method;          // structural, dilation
  int nmax = 0;
  std::vector<int> coordinates;  // structural: isometric coordinates
  std::vector<int> exits;        // structural: those whose orbit leaves the window within nmax
};

/// X_n = ker((I - P) V^n W), or the equivalent stacked kernel of A T^k (k < n).
Subspace isometry_subspace(const DilationBundle& b, int n);

/// Intersection of X_1..X_nmax from a dilation bundle.
IsometrySet x_of_T(const DilationBundle& b, int nmax);
/// Structural X(T) for diagonal, monomial and shift annotations. Coordinates whose
/// orbit leaves the window count as isometric (the model operator is).
IsometrySet x_of_T(const Operator& T, int nmax);

struct DecompositionResult {
  std::string kind;  // wold, canonical, levan
  std::vector<std::pair<std::string, Subspace>> parts;
  std::vector<std::pair<std::string, double>> residuals;
  Certificate check;

  const Subspace& part(const std::string& name) const;
  double residual(const std::string& name) const;
};

/// X1 = (∩ V^n D) ∩ (∩ A^n D), X2 = span{V^n L}, L = ker A ∩ D, over n <= horizon,
/// where D is the domain subspace and A the left inverse of V.
DecompositionResult wold_decompose(const Operator& V, const Subspace& domain, int horizon, std::uint64_t seed = 1);
DecompositionResult wold_decompose(const Operator& V, int horizon, std::uint64_t seed = 1);

/// Unitary part W and its complement W' from the structural X(T). With `safe`
/// the parts are also reported restricted to those coordinates (suffix "|safe").
DecompositionResult canonical_decompose(const Operator& T, int nmax, const std::vector<int>& safe = {},
                                        std::uint64_t seed = 1);

/// W1 (unitary), W2 (shift) and W' (completely non-isometric evidence).
DecompositionResult levan_decompose(const Operator& T, int nmax, const std::vector<int>& safe = {},
                                    std::uint64_t seed = 1);

/// Samples T-invariant subspaces on which T is unitary (random subspaces of
/// unimodular eigenspaces) and checks each lies in W.
Certificate maximality_check(const Operator& T, const Subspace& W, int samples, std::uint64_t seed);

nlohmann::json to_json(const DecompositionResult& r);

}  // namespace bjlab
