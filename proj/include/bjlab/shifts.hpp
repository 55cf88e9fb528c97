#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bjlab/certificate.hpp"
#include "bjlab/operator.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

/// Forward shift M_z on BlockSeq(X, blocks).
Operator make_unilateral_shift(const Space& X, int blocks);
/// Backward shift on BlockSeq(X, blocks).
Operator make_backward_shift(const Space& X, int blocks);
/// (U x)_n = x_{n-1} on BiBlockSeq(X, halfwidth).
Operator make_bilateral_shift(const Space& X, int halfwidth);

/// Coefficient space with two norms and the shift between them.
struct SigmaShiftBundle {
  Space Y;  // BiBlockSeq carrier of the coefficients
  std::function<double(const CVector&)> norm_y;
  std::function<double(const CVector&)> norm_sigma;
  Operator U;             // (l_n) -> (l_{n-1})
  Subspace generating;    // block 0
  int halfwidth = 0;
};

/// Bilateral shift on BiBlockSeq(X, halfwidth); both norms are the block l2 norm.
SigmaShiftBundle make_sigma_shift(const Space& X, int halfwidth);

/// Isometry, two-sided wandering of block 0 (n = 1..horizon) and the 2-sum split.
Certificate verify_sigma_shift(const SigmaShiftBundle& b, int horizon, std::uint64_t seed = 1);

struct SigmaExtension {
  SigmaShiftBundle bundle;
  Certificate check;  // residuals: isometry, extension, embedding, sqrt2 ratio, hilbert collapse
};

/// σ-shift extending a truncated unilateral shift V with generating subspace
/// spanned by the columns of L. Sequences l_n (n = -horizon..horizon) are
/// coefficients in L; |l|_Y^2 = |sum_{n<0} V^{|n|} L l_n|^2 + |sum_{n>=0} V^n L l_n|^2.
SigmaExtension sigma_extension(const Operator& V, const CMatrix& L, int horizon, std::uint64_t seed = 1);

struct PhiResult {
  Operator op;
  double rcond = 0.0;
  bool flagged = false;  // condition number above 1e8
};

/// phi_alpha(T) = (T - alpha I)(I - conj(alpha) T)^{-1}.
PhiResult phi_alpha(const Operator& T, cplx alpha);

struct MobiusSearch {
  cplx alpha{0.0, 0.0};
  double norm = 0.0;
  bool exact = false;
};
/// Largest |phi_alpha(T)| over a polar grid of alphas (radii k/radii, 16 angles), refined locally.
MobiusSearch mobius_norm_search(const Operator& T, int radii = 20, std::uint64_t seed = 1);

struct TwoBlockProbe {
  double phi_norm = 0.0;    // |phi_alpha(U) ybar|
  double input_norm = 0.0;  // |ybar|
  double forward = 0.0;     // |x - alpha y|
  double backward = 0.0;    // |y - conj(alpha) x|
};
/// ybar = (I - conj(alpha) U) xbar with xbar = (.., 0, x at block 0, y at block 1, 0, ..).
TwoBlockProbe bilateral_phi_probe(const Space& X, int halfwidth, cplx alpha, const CVector& x, const CVector& y);

/// Search unit x, y in X and alpha for |phi_alpha(U) ybar| > |ybar|. Value is the excess.
Certificate bilateral_phi_search(const Space& X, int halfwidth, int trials, std::uint64_t seed = 1);

struct SpectrumPoint {
  cplx lambda;
  double residual = 0.0;
  int horizon = 0;
};

/// Upper bound on inf |(U - lambda) x| over unit x supported in blocks -horizon..horizon-1.
SpectrumPoint spectrum_probe(const SigmaShiftBundle& b, cplx lambda, int horizon, std::uint64_t seed = 1);

/// CSV with header lambda_re,lambda_im,residual,horizon.
std::string spectrum_csv(const std::vector<SpectrumPoint>& points);

}  // namespace bjlab
