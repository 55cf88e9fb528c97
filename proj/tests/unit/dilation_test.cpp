#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace bjlab;
using namespace testing_helpers;

namespace {

CMatrix random_contraction(int n, std::uint64_t seed, double target) {
  Rng rng(seed);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
  Eigen::BDCSVD<CMatrix> svd(m);
  return m * (target / svd.singularValues()[0]);
}

NormCertificate certify(const Operator& T) {
  SearchOptions o;
  o.budget = 200;
  return triangle_violation_search(T, o);
}

}  // namespace

TEST(Dilation, TwoCoordinateViolationL32) {
  const Operator T(CMatrix{{0.7, -0.7}, {0.0, 0.0}}, Space::lp(2, 1.5));
  const NormCertificate c = certify(T);
  EXPECT_EQ(c.verdict, NormVerdict::violation);
  EXPECT_NEAR(c.margin, 2.0 * std::sqrt(0.51) - std::pow(2.0, 2.0 / 3.0), 1e-6);
  EXPECT_NEAR(a_T(T, unit(2, 0)) + a_T(T, unit(2, 1)), 2.0 * std::sqrt(0.51), 1e-9);
  EXPECT_NEAR(a_T(T, vec({1.0, 1.0})), std::pow(2.0, 2.0 / 3.0), 1e-9);
}

TEST(Dilation, TwoCoordinateViolationL3) {
  const Space X = Space::lp(2, 3.0);
  const Operator S(CMatrix{{0.7, 0.0}, {-0.7, 0.0}}, X);
  const double s = std::pow(2.0, -1.0 / 3.0);
  const CVector u = vec({s, s}), v = vec({-s, s});
  EXPECT_NEAR(X.norm(S(u)), 0.7, 1e-9);
  EXPECT_NEAR(triangle_margin(S, u, v), 2.0 * std::sqrt(0.51) - std::pow(2.0, 2.0 / 3.0), 1e-9);
  EXPECT_EQ(certify(S).verdict, NormVerdict::violation);
}

TEST(Dilation, LambdaWindowEndpoints) {
  const LambdaWindow a = lambda_window(1.5);
  EXPECT_NEAR(a.lower, std::sqrt(1.0 - std::pow(2.0, -2.0 / 3.0)), 1e-14);
  EXPECT_NEAR(a.upper, std::pow(2.0, -1.0 / 3.0), 1e-14);
  EXPECT_LT(a.lower, 0.7);
  EXPECT_GT(a.upper, 0.7);
  const LambdaWindow b = lambda_window(3.0);
  EXPECT_NEAR(b.lower, a.lower, 1e-14);
  EXPECT_NEAR(b.upper, a.upper, 1e-14);
  EXPECT_THROW(lambda_window(2.0), LabError);
}

TEST(Dilation, HilbertContractionsGiveNorms) {
  for (int s = 0; s < 10; ++s) {
    const Operator T(random_contraction(4, 500 + s, 0.9), Space::lp(4, 2.0));
    const NormCertificate c = certify(T);
    EXPECT_EQ(c.verdict, NormVerdict::norm);
    EXPECT_GE(c.margin, -1e-10);
  }
}

TEST(Dilation, ZeroOperatorDilation) {
  const Operator T(CMatrix::Zero(2, 2), Space::lp(2, 2.0));
  const DilationBundle b = build_min_dilation(T, certify(T), 6);
  const Certificate v = verify_dilation(b, 4);
  EXPECT_EQ(v.verdict, "pass");
  // P V^k W = 0 for k >= 1
  CMatrix Vk = b.V.matrix();
  for (int k = 1; k <= 4; ++k, Vk = b.V.matrix() * Vk)
    EXPECT_LT(max_abs(b.P.matrix() * Vk * b.W.matrix()), 1e-15) << k;
}

TEST(Dilation, DiagonalHilbertResiduals) {
  const Operator T = diagonal(Space::lp(2, 2.0), vec({0.5, 1.0 / 3.0}));
  const DilationBundle b = build_min_dilation(T, certify(T), 6);
  const Certificate v = verify_dilation(b, 4, 1e-12);
  EXPECT_EQ(v.verdict, "pass");
  EXPECT_LT(v.value, 1e-12);
  const CVector x = vec({0.3, {0.0, -1.0}});
  EXPECT_NEAR(b.K.norm(b.V(b.W(x))), b.X.norm(x), 1e-12);
}

TEST(Dilation, DiagonalLpIdentity) {
  const Space X = Space::lp(4, 3.0);
  const Operator T = diagonal(X, vec({0.6, {0.0, 0.6}, -0.6, 0.6}));
  const auto D = defect_representation(T);
  ASSERT_TRUE(D.has_value());
  EXPECT_LT(max_abs(D->matrix() - CMatrix::Identity(4, 4) * 0.8), 1e-14);
  const DilationBundle b = build_min_dilation(T, certify(T), 6);
  EXPECT_EQ(verify_dilation(b, 4).verdict, "pass");
  const DilationBundle r = build_rowform_dilation(T, *D, 6);
  EXPECT_EQ(verify_dilation(r, 2).verdict, "pass");
}

TEST(Dilation, CorruptedVIsLocalized) {
  const Operator T = diagonal(Space::lp(3, 2.0), vec({0.5, 0.2, 0.7}));
  DilationBundle b = build_min_dilation(T, certify(T), 6);
  CMatrix V = b.V.matrix();
  V(b.X.dim() + 1, 1) += 1e-3;
  b.V = Operator(V, b.K);
  const Certificate v = verify_dilation(b, 4);
  EXPECT_EQ(v.verdict, "fail");
  ASSERT_FALSE(v.witnesses.empty());
  EXPECT_NE(v.note.find("coordinate"), std::string::npos);
}

TEST(Dilation, RefusesViolation) {
  const Operator T(CMatrix{{0.7, -0.7}, {0.0, 0.0}}, Space::lp(2, 1.5));
  EXPECT_THROW(build_min_dilation(T, certify(T), 6), LabError);
}

TEST(Dilation, DefectRepresentations) {
  const auto z = defect_representation(Operator(CMatrix::Zero(2, 2), Space::lp(2, 2.0)));
  ASSERT_TRUE(z.has_value());
  EXPECT_LT(max_abs(z->matrix() - CMatrix::Identity(2, 2)), 1e-14);
  const auto d = defect_representation(diagonal(Space::lp(2, 2.0), vec({0.6, 0.8})));
  ASSERT_TRUE(d.has_value());
  EXPECT_LT(max_abs(d->matrix() - CMatrix(CVector(vec({0.8, 0.6})).asDiagonal())), 1e-14);
  // block-constant diagonals on l2(l3^2): mu = sqrt(1 - lambda^2) per block
  const Space K = Space::block_seq(Space::lp(2, 3.0), 3);
  const Operator T = diagonal(K, vec({0.1, 0.1, 0.5, 0.5, 0.9, 0.9}));
  const auto m = defect_representation(T);
  ASSERT_TRUE(m.has_value());
  for (int s = 0; s < 5; ++s) {
    const CVector x = random_unit(K, 70 + s);
    EXPECT_NEAR(m->codomain().norm((*m)(x)), a_T(T, x), 1e-12);
  }
  EXPECT_NEAR(std::abs(m->matrix()(2, 2)), std::sqrt(0.75), 1e-14);
  // a non-constant diagonal on one l3 leaf has no such representation
  EXPECT_FALSE(defect_representation(diagonal(Space::lp(3, 3.0), vec({0.1, 0.5, 0.9}))).has_value());
}

TEST(Dilation, RowformMatchesHilbertDefect) {
  const Operator T(random_contraction(3, 21, 0.8), Space::lp(3, 2.0));
  const auto D = defect_representation(T);
  ASSERT_TRUE(D.has_value());
  const DilationBundle r = build_rowform_dilation(T, *D, 6);
  EXPECT_EQ(verify_dilation(r, 2).verdict, "pass");
  const DilationBundle b = build_min_dilation(T, certify(T), 6);
  // first residual blocks carry |D_T x| in both constructions
  const CVector x = random_unit(T.domain(), 5);
  EXPECT_NEAR(r.K.norm(r.V(r.W(x))), b.K.norm(b.V(b.W(x))), 1e-12);
  // T = 0 with A = I: V is a permuted shift
  const Operator Z(CMatrix::Zero(2, 2), Space::lp(2, 2.0));
  const DilationBundle zr = build_rowform_dilation(Z, identity(Z.domain()), 4);
  EXPECT_EQ(verify_dilation(zr, 2).verdict, "pass");
}

TEST(Dilation, NagyIntertwiner) {
  const Operator Z(CMatrix::Zero(2, 2), Space::lp(2, 2.0));
  const Operator W0 = nagy_backward_intertwiner(Z, 5);
  const CVector x = vec({0.6, 0.8});
  EXPECT_NEAR(W0.codomain().norm(W0(x)), 1.0, 1e-15);
  const Operator H = diagonal(Space::lp(1, 2.0), vec({0.5}));
  const Operator W = nagy_backward_intertwiner(H, 20);
  EXPECT_LE(std::abs(W.codomain().norm(W(vec({1.0}))) - 1.0), std::pow(2.0, -20));
  EXPECT_THROW(nagy_backward_intertwiner(identity(Space::lp(2, 2.0)), 5), LabError);
}
