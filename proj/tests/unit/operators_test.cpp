#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace bjlab;
using namespace testing_helpers;

namespace {

CMatrix random_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
  return m;
}

}  // namespace

TEST(Operators, NormClosedForms) {
  const NormEstimate d = operator_norm(diagonal(Space::lp(2, 3.0), vec({0.5, 0.25})));
  EXPECT_NEAR(d.value, 0.5, 1e-14);
  EXPECT_TRUE(d.exact);
  const NormEstimate l = operator_norm(Operator(CMatrix{{0.3, -0.3}, {0.0, 0.0}}, Space::lp(2, 1.0)));
  EXPECT_NEAR(l.value, 0.3, 1e-14);
  EXPECT_TRUE(l.exact);
}

TEST(Operators, NormOraclesL1L2Linf) {
  const CMatrix m = random_matrix(4, 9);
  EXPECT_NEAR(operator_norm(Operator(m, Space::lp(4, 1.0))).value, m.cwiseAbs().colwise().sum().maxCoeff(), 1e-12);
  EXPECT_NEAR(operator_norm(Operator(m, Space::lp(4, kInf))).value, m.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
  Eigen::BDCSVD<CMatrix> svd(m);
  EXPECT_NEAR(operator_norm(Operator(m, Space::lp(4, 2.0))).value, svd.singularValues()[0], 1e-12);
}

TEST(Operators, NormEstimateIsFeasibleLowerBound) {
  const Space X = Space::lp(3, 3.0);
  const Operator T(random_matrix(3, 4), X);
  const NormEstimate e = operator_norm(T);
  ASSERT_EQ(e.witness.size(), 3);
  EXPECT_NEAR(X.norm(e.witness), 1.0, 1e-12);
  EXPECT_NEAR(X.norm(T(e.witness)), e.value, 1e-10);
  for (int s = 0; s < 300; ++s) EXPECT_LE(X.norm(T(random_unit(X, 40 + s))), e.value * (1 + 1e-12));
}

TEST(Operators, ATValues) {
  const Space X = Space::lp(2, 1.5);
  const Operator Z(CMatrix::Zero(2, 2), X);
  const CVector x = vec({1.0, {0.0, 2.0}});
  EXPECT_NEAR(a_T(Z, x), X.norm(x), 1e-15);
  const Operator T(CMatrix{{0.7, -0.7}, {0.0, 0.0}}, X);
  EXPECT_NEAR(a_T(T, unit(2, 0)), std::sqrt(0.51), 1e-12);
  EXPECT_THROW(a_T(identity(X).scaled(2.0), x), LabError);
  EXPECT_NEAR(a_hat_T(T, 0.7 * std::pow(2.0, 1.0 / 3.0), unit(2, 0)),
              std::sqrt(0.49 * std::pow(2.0, 2.0 / 3.0) - 0.49), 1e-12);
}

TEST(Operators, Classification) {
  EXPECT_EQ(classify_contraction(diagonal(Space::lp(2, 2.0), vec({0.5, 1.0 / 3.0}))).cls, ContractionClass::strict);
  const Operator G2(CMatrix{{1.0, 0.0, 0.0}, {0.0, 0.5, -0.5}, {0.0, 0.0, 0.0}}, Space::lp(3, 1.0));
  const Classification c = classify_contraction(G2);
  EXPECT_EQ(c.cls, ContractionClass::G2);
  ASSERT_FALSE(c.cert.witnesses.empty());
  EXPECT_NEAR(std::abs(c.cert.witnesses[0][0]), 1.0, 1e-9);
  const Operator B = make_backward_shift(Space::lp(2, 3.0), 4);
  const Classification cb = classify_contraction(B);
  EXPECT_EQ(cb.cls, ContractionClass::G2);
  ASSERT_FALSE(cb.cert.witnesses.empty());
  EXPECT_LT(cb.cert.witnesses[0].head(2).norm(), 1e-9);
  EXPECT_EQ(classify_contraction(identity(Space::lp(2, 2.0)).scaled(1.5)).cls, ContractionClass::not_contraction);
}

TEST(Operators, NormAttainmentNotSubspaceInL1) {
  const Operator T(CMatrix{{0.5, -0.5}, {0.0, 0.0}}, Space::lp(2, 1.0));
  const AttainmentSet a = norm_attainment_set(T);
  EXPECT_NEAR(a.norm, 0.5, 1e-12);
  EXPECT_FALSE(a.is_subspace);
  ASSERT_EQ(a.counterexample.size(), 2);
  EXPECT_NEAR(std::abs(a.counterexample[0]), std::abs(a.counterexample[1]), 1e-6);
}

TEST(Operators, NormAttainmentKernelOfDefect) {
  const Space X = Space::block_seq(Space::lp(2, 3.0), 3);
  const Operator T = diagonal(X, vec({1.0, 1.0, 0.5, 0.5, 1.0, 1.0}));
  const auto A = defect_representation(T);
  ASSERT_TRUE(A.has_value());
  const AttainmentSet a = norm_attainment_set(T, 1, A);
  ASSERT_TRUE(a.kernel.has_value());
  EXPECT_LT(distance(*a.kernel, Subspace::coordinates(X, {0, 1, 4, 5})), 1e-12);
  EXPECT_TRUE(a.is_subspace);
}

TEST(Operators, BanachAdjoint) {
  const Space X = Space::lp(3, 3.0);
  const Operator I = identity(X);
  EXPECT_LT(max_abs(banach_adjoint(I).matrix() - CMatrix::Identity(3, 3)), 1e-15);
  EXPECT_NEAR(banach_adjoint(I).domain().p(), 1.5, 1e-15);
  const Operator T(random_matrix(3, 1), X), S(random_matrix(3, 2), X);
  EXPECT_LT(max_abs(banach_adjoint(T.compose(S)).matrix() -
                    banach_adjoint(S).compose(banach_adjoint(T)).matrix()),
            1e-12);
  EXPECT_NEAR(operator_norm(banach_adjoint(T), 64).value, operator_norm(T, 64).value,
              1e-6 * operator_norm(T).value);
}

TEST(Operators, LeftInverseOfShift) {
  const Space X = Space::lp(2, 3.0);
  const Operator V = make_unilateral_shift(X, 5);
  const Operator A = left_inverse(V);
  EXPECT_LT(max_abs(A.matrix() - make_backward_shift(X, 5).matrix()), 1e-15);
  EXPECT_LT(max_abs(A.compose(V).matrix().topLeftCorner(8, 8) - CMatrix::Identity(8, 8)), 1e-15);
  // P = VA is a norm-one projection onto the range of V
  const Operator P = V.compose(A);
  EXPECT_EQ(norm_one_projection_check(P).verdict, "pass");
  EXPECT_THROW(left_inverse(Operator(random_matrix(2, 3), X)), LabError);
}

TEST(Operators, LeftInverseOfPhaseUnitaryPlusShift) {
  const Space X = Space::lp(5, 3.0);
  // e0 -> i e0 (unitary part), e1 -> e2 -> e3 -> e4 (shift part)
  const Operator V = monomial(X, {0, 2, 3, 4, 5}, vec({{0.0, 1.0}, 1.0, 1.0, 1.0, 1.0}));
  const Operator A = left_inverse(V);
  const CMatrix AV = A.compose(V).matrix();
  EXPECT_LT(max_abs(AV.topLeftCorner(4, 4) - CMatrix::Identity(4, 4)), 1e-15);
  EXPECT_NEAR(operator_norm(A).value, 1.0, 1e-8);
}

TEST(Operators, JsonRoundTrip) {
  const Space X = Space::block_seq(Space::lp(2, 3.0), 3);
  for (const Operator& T : {make_unilateral_shift(Space::lp(2, 3.0), 3), diagonal(X, CVector::LinSpaced(6, 0.1, 0.6)),
                            Operator(random_matrix(6, 8), X)}) {
    const Operator U = Operator::from_json(T.to_json());
    EXPECT_EQ(U.matrix(), T.matrix());
    EXPECT_EQ(U.to_json(), T.to_json());
  }
}
