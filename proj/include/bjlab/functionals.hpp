#pragma once

#include <cstdint>

#include "bjlab/certificate.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

/// Element of the dual of `predual`; acts by f(x) = sum_i coeffs_i x_i (no conjugation).
struct Functional {
  CVector coeffs;
  Space predual;

  cplx operator()(const CVector& x) const;
  double dual_norm() const;
};

/// Norm of f as a functional on `space`: sup |f(x)| over the unit ball.
double dual_norm(const Space& space, const CVector& f);

/// Support functional f_x: f_x(x) = |x|^2 and |f_x| = |x|.
///
/// Defined on lp leaves with 1 < p < inf and on their 2-sums and block
/// sequences. For p in {1, inf} only smooth points are accepted unless
/// `canonical` is set: p = 1 then uses the phase vector on the support, p = inf
/// puts all mass on the first maximal coordinate.
CVector support_functional(const Space& space, const CVector& x, bool canonical = false);
Functional support(const Space& space, const CVector& x, bool canonical = false);

/// Duality map with J(0) = 0 on every part; `canonical` as above.
CVector duality_map(const Space& space, const CVector& x, bool canonical = false);

/// Inverse duality map: the x with J(x) = f.
CVector inverse_duality(const Space& space, const CVector& f);

/// Unit vector x0 with |f(x0)| = |f|.
CVector functional_attainment(const Space& space, const CVector& f);

/// Minimal-norm Hahn-Banach extension of the functional on span(Y.basis())
/// given by values[j] = f(y_j).
CVector hahn_banach_extend(const Subspace& Y, const CVector& values, std::uint64_t seed = 1);

/// Additivity defect of the extension operator over sampled pairs on Y.
Certificate hb_linearity_probe(const Subspace& Y, int trials, std::uint64_t seed);

/// T_*(x) = J^{-1}(T^x J(x)).
CVector star_adjoint_eval(const Operator& T, const CVector& x);

/// Additivity defect of x -> T_* x over sampled pairs.
Certificate star_linearity_probe(const Operator& T, int trials, std::uint64_t seed);

/// Verdict for a measured linearity defect: linear, nonlinear or inconclusive.
std::string linearity_verdict(double defect);

}  // namespace bjlab
