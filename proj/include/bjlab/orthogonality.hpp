#pragma once

#include <cstdint>

#include "bjlab/certificate.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

struct BjMin {
  cplx lambda{0.0, 0.0};
  double value = 0.0;
};

/// Minimizer and minimum of lambda -> |x + lambda y|.
BjMin bj_min(const Space& space, const CVector& x, const CVector& y);

/// x ⊥_B y iff bj_min >= |x| - tol * max(1, |x|). In smooth lp spaces the James
/// criterion |f_x(y)| is evaluated too and gross disagreement raises InconsistentError.
Certificate bj_orthogonal(const Space& space, const CVector& x, const CVector& y, double tol = 1e-9);

/// Y ⊥_B Z by sampling unit pairs plus a local search for the worst pair.
Certificate bj_subspace(const Subspace& Y, const Subspace& Z, int samples, std::uint64_t seed);

/// Idempotent, norm one, and range ⊥_B kernel. Range and kernel bases are the witnesses.
Certificate norm_one_projection_check(const Operator& P, std::uint64_t seed = 1);

/// 0 in the convex hull of { f(z) conj(g(z)) : |f(z)| >= |f|(1 - 10/G) } on the grid of a PolySup space.
Certificate convex_hull_bj_poly(const Space& poly, const CVector& f, const CVector& g);

}  // namespace bjlab
