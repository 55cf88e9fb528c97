#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace bjlab;
using namespace testing_helpers;

namespace {

// brute-force min over lambda = r e^{it}, r in [0, rmax]
double scan_min(const Space& X, const CVector& x, const CVector& y, double rmax, int nr, int nt) {
  double best = X.norm(x);
  for (int i = 0; i <= nr; ++i)
    for (int k = 0; k < nt; ++k) {
      const cplx l = std::polar(rmax * i / nr, 2.0 * std::numbers::pi * k / nt);
      best = std::min(best, X.norm(x + l * y));
    }
  return best;
}

}  // namespace

TEST(Orthogonality, BjMinHilbertCases) {
  const Space X = Space::lp(2, 2.0);
  const BjMin a = bj_min(X, unit(2, 0), unit(2, 1));
  EXPECT_NEAR(a.value, 1.0, 1e-12);
  EXPECT_LT(std::abs(a.lambda), 1e-6);
  const BjMin b = bj_min(X, unit(2, 0), unit(2, 0));
  EXPECT_NEAR(b.value, 0.0, 1e-9);
  EXPECT_NEAR(std::abs(b.lambda + 1.0), 0.0, 1e-6);
  EXPECT_THROW(bj_min(X, unit(2, 0), CVector::Zero(2)), LabError);
}

TEST(Orthogonality, BjMinAgainstScan) {
  const Space X = Space::lp(2, 1.5);
  const CVector x = vec({1.0, 1.0}), y = unit(2, 0);
  const BjMin m = bj_min(X, x, y);
  const double oracle = scan_min(X, x, y, 2.0, 400, 64);
  EXPECT_LT(m.value, X.norm(x));
  EXPECT_LE(m.value, oracle + 1e-9);
  EXPECT_NEAR(X.norm(x + m.lambda * y), m.value, 1e-12);
}

TEST(Orthogonality, BjMinRandomPairsAgainstScan) {
  for (double p : {1.0, 3.0, kInf}) {
    const Space X = Space::lp(3, p);
    for (int s = 0; s < 4; ++s) {
      const CVector x = random_unit(X, 10 + s), y = random_unit(X, 50 + s);
      const double oracle = scan_min(X, x, y, 3.0, 150, 48);
      EXPECT_LE(bj_min(X, x, y).value, oracle + 1e-9) << p;
    }
  }
}

TEST(Orthogonality, DisjointSupportsAreOrthogonal) {
  for (double p : {1.0, 1.5, 3.0, kInf}) {
    const Space X = Space::lp(4, p);
    EXPECT_EQ(bj_orthogonal(X, vec({1.0, 2.0, 0.0, 0.0}), vec({0.0, 0.0, 1.0, {0.0, 1.0}})).verdict, "orthogonal") << p;
  }
}

TEST(Orthogonality, SupNormExamples) {
  const Space X = Space::lp(3, kInf);
  EXPECT_EQ(bj_orthogonal(X, vec({1.0, 1.0, 1.0}), unit(3, 0)).verdict, "orthogonal");
  EXPECT_EQ(bj_orthogonal(X, vec({1.0, 1.0, 1.0}), unit(3, 1)).verdict, "orthogonal");
}

TEST(Orthogonality, JamesCriterionAgreesInSmoothSpaces) {
  const Space X = Space::lp(3, 3.0);
  for (int s = 0; s < 5; ++s) {
    const CVector x = random_unit(X, 200 + s);
    CVector y = random_unit(X, 300 + s);
    const CVector f = support_functional(X, x);
    const cplx fy = (f.transpose() * y)(0, 0), fx = (f.transpose() * x)(0, 0);
    const CVector y0 = y - (fy / fx) * x;
    EXPECT_EQ(bj_orthogonal(X, x, y0).verdict, "orthogonal");
    EXPECT_EQ(bj_orthogonal(X, x, y).verdict, "not-orthogonal");
  }
}

TEST(Orthogonality, Subspaces) {
  const Space X = Space::lp(4, 3.0);
  EXPECT_EQ(bj_subspace(Subspace::coordinates(X, {0, 1}), Subspace::coordinates(X, {2, 3}), 16, 1).verdict,
            "orthogonal");
  const Space S = Space::lp(3, kInf);
  EXPECT_EQ(bj_subspace(Subspace::span(S, {vec({1.0, 1.0, 1.0})}), Subspace::coordinates(S, {0, 1}), 16, 1).verdict,
            "orthogonal");
  const Space L3 = Space::lp(3, 3.0);
  const Certificate c =
      bj_subspace(Subspace::span(L3, {vec({1.0, 1.0, 0.0})}), Subspace::coordinates(L3, {0}), 16, 1);
  EXPECT_EQ(c.verdict, "not-orthogonal");
  EXPECT_FALSE(c.witnesses.empty());
}

TEST(Orthogonality, NormOneProjections) {
  CMatrix P = CMatrix::Zero(4, 4);
  P(0, 0) = P(1, 1) = 1.0;
  for (double p : {1.0, 3.0, kInf}) EXPECT_EQ(norm_one_projection_check(Operator(P, Space::lp(4, p))).verdict, "pass");
  CMatrix A(2, 2);
  A << 0.5, 0.5, 0.5, 0.5;
  EXPECT_EQ(norm_one_projection_check(Operator(A, Space::lp(2, 1.0))).verdict, "pass");
  CMatrix R(2, 2);
  R << 1.0, 1.0, 0.0, 0.0;
  const Certificate bad = norm_one_projection_check(Operator(R, Space::lp(2, 2.0)));
  EXPECT_EQ(bad.verdict, "norm-not-one");
  EXPECT_NEAR(bad.value, std::sqrt(2.0), 1e-9);
  CMatrix N(2, 2);
  N << 1.0, 1.0, 0.0, 1.0;
  EXPECT_NE(norm_one_projection_check(Operator(N, Space::lp(2, 2.0))).verdict, "pass");
}

TEST(Orthogonality, ConvexHullPolynomialCriterion) {
  const Space P = Space::poly_sup(3, 4096);
  EXPECT_EQ(convex_hull_bj_poly(P, unit(4, 2), unit(4, 1)).verdict, "orthogonal");
  EXPECT_EQ(convex_hull_bj_poly(P, vec({0.0, 1.0, 1.0, 0.0}), unit(4, 0)).verdict, "not-orthogonal");
  EXPECT_EQ(convex_hull_bj_poly(P, vec({0.3, 1.0, 0.0, 2.0}), CVector::Zero(4)).verdict, "orthogonal");
}

TEST(Orthogonality, DiskAlgebraMonomials) {
  const Space P = Space::poly_sup(4, 4096);
  for (int n = 1; n <= 4; ++n)
    for (int m = 0; m < n; ++m) EXPECT_EQ(bj_orthogonal(P, unit(5, n), unit(5, m)).verdict, "orthogonal");
  EXPECT_LT(bj_min(P, vec({0.0, 1.0, 1.0, 0.0, 0.0}), unit(5, 0)).value, 2.0 - 0.02);
}
