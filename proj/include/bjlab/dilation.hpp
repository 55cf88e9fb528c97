#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bjlab/certificate.hpp"
#include "bjlab/operator.hpp"

namespace bjlab {

struct SearchOptions {
  std::string id = "T";
  int budget = 2000;  // descent iterations in the random phase
  std::uint64_t seed = 1;
  /// Extra structured seeds tried before the random phase (e.g. known witnesses).
  std::vector<std::pair<CVector, CVector>> seeds;
};

/// Decide whether A_T is a norm, a semi-norm, or violates the triangle inequality.
///
/// Structured seeds (coordinate pairs with phases, then `opt.seeds`) are tried
/// first; any violation among them is reported as is. Otherwise a seeded random
/// descent over unit pairs runs for `opt.budget` iterations, and positivity is
/// decided from the operator norm and its attainment.
NormCertificate triangle_violation_search(const Operator& T, const SearchOptions& opt = {});

/// A_T(x) + A_T(y) - A_T(x + y).
double triangle_margin(const Operator& T, const CVector& x, const CVector& y);

/// Range of lambda for which the two-coordinate operators on l_p^2 are
/// contractions with a triangle violation.
struct LambdaWindow {
  double lower = 0.0;
  double upper = 0.0;
};
LambdaWindow lambda_window(double p);

struct DilationBundle {
  std::string construction;  // block-min, rowform
  Space X, K;
  Operator T, V, W, P;
  int depth = 0;
  /// Dimension of one residual block in the minimality count.
  int residual_rank = 0;
  /// Operator A with |Ax| = A_T(x), when known.
  std::optional<Operator> defect;
  std::optional<NormCertificate> certificate;
};

/// K = BlockSeq(X ⊕2 (X, A_T), depth), V(x0, x1, ...) = (T x0, D x0, x1, ...).
DilationBundle build_min_dilation(const Operator& T, const NormCertificate& cert, int depth);

/// Lower-triangular dilation from a representation A: X -> BlockSeq(X, m) (or X itself).
DilationBundle build_rowform_dilation(const Operator& T, const Operator& A, int depth);

/// Checks |P V^k W x - W T^k x| <= tol for k <= kmax on seeded samples, plus
/// isometry of W and V (boundary-safe) and the minimality rank for block-min.
Certificate verify_dilation(const DilationBundle& b, int kmax, double tol = 1e-10, std::uint64_t seed = 1);

/// Operator A with |Ax| = A_T(x): D_T on Euclidean spaces, T_mu for diagonals that
/// are constant on every lp leaf. Empty otherwise.
std::optional<Operator> defect_representation(const Operator& T);

/// W x = (D_T x, D_T T x, ..., D_T T^{depth-1} x) into BlockSeq(X, depth).
Operator nagy_backward_intertwiner(const Operator& T, int depth);

}  // namespace bjlab
