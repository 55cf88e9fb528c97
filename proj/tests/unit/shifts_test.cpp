#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace bjlab;
using namespace testing_helpers;

TEST(Shifts, UnilateralShiftAction) {
  const Operator M = make_unilateral_shift(Space::lp(1, 2.0), 3);
  EXPECT_EQ(M(vec({1.0, 2.0, 0.0})), vec({0.0, 1.0, 2.0}));
  const Operator B = make_backward_shift(Space::lp(2, 3.0), 4);
  const Operator V = make_unilateral_shift(Space::lp(2, 3.0), 4);
  EXPECT_LT(max_abs(B.compose(V).matrix().topLeftCorner(6, 6) - CMatrix::Identity(6, 6)), 0.0 + 1e-300);
}

TEST(Shifts, WanderingBlocksAreOrthogonal) {
  const Space X = Space::lp(2, 3.0);
  const Operator V = make_unilateral_shift(X, 5);
  const Space& K = V.domain();
  for (int n = 1; n <= 3; ++n) {
    const Subspace Ln = Subspace::coordinates(K, {2 * n, 2 * n + 1});
    const Subspace L0 = Subspace::coordinates(K, {0, 1});
    EXPECT_EQ(bj_subspace(Ln, L0, 8, 1).verdict, "orthogonal") << n;
  }
}

TEST(Shifts, SigmaShiftBundle) {
  const Space X = Space::lp(2, 3.0);
  const SigmaShiftBundle b = make_sigma_shift(X, 6);
  EXPECT_EQ(verify_sigma_shift(b, 4, 1).verdict, "pass");
  // U^{-1} U = I on interior blocks
  const CMatrix U = b.U.matrix();
  CVector x = CVector::Zero(b.Y.dim());
  x.segment(b.Y.block_offset(-2), 2) = vec({1.0, {0.0, 2.0}});
  x.segment(b.Y.block_offset(3), 2) = vec({-1.0, 0.5});
  EXPECT_LT((U.adjoint() * (U * x) - x).norm(), 1e-15);
  // 2-sum split of negative and nonnegative blocks
  CVector w1 = CVector::Zero(b.Y.dim()), w2 = CVector::Zero(b.Y.dim());
  w1.segment(b.Y.block_offset(-1), 2) = vec({1.0, 2.0});
  w2.segment(b.Y.block_offset(2), 2) = vec({3.0, -1.0});
  EXPECT_NEAR(std::pow(b.norm_y(w1 + w2), 2), std::pow(b.norm_y(w1), 2) + std::pow(b.norm_y(w2), 2), 1e-12);
  EXPECT_THROW(make_sigma_shift(X, 1), LabError);
}

TEST(Shifts, SigmaExtensionHilbertCollapse) {
  const Operator V = make_unilateral_shift(Space::lp(1, 2.0), 10);
  CMatrix L = CMatrix::Zero(10, 1);
  L(0, 0) = 1.0;
  const SigmaExtension e = sigma_extension(V, L, 4, 1);
  EXPECT_EQ(e.check.verdict, "pass");
  Rng rng(2);
  const CVector l = rng.gaussian(e.bundle.Y.dim());
  EXPECT_NEAR(e.bundle.norm_y(l), l.norm(), 1e-12);
}

TEST(Shifts, SigmaExtensionLp) {
  const Space X = Space::lp(2, 3.0);
  const Operator V = make_unilateral_shift(X, 12);
  CMatrix L = CMatrix::Zero(V.domain().dim(), 2);
  L.topRows(2).setIdentity();
  const SigmaExtension e = sigma_extension(V, L, 4, 1);
  EXPECT_EQ(e.check.verdict, "pass");
  ASSERT_GE(e.check.residuals.size(), 4u);
  EXPECT_LT(e.check.residuals[0], 1e-12);
  EXPECT_LT(e.check.residuals[1], 1e-12);
  EXPECT_LE(e.check.residuals[3], std::sqrt(2.0) + 1e-9);
  EXPECT_THROW(sigma_extension(diagonal(V.domain(), CVector::Ones(V.domain().dim())), L, 4, 1), LabError);
}

TEST(Shifts, PhiAlgebra) {
  const Space X = Space::lp(3, 3.0);
  Rng rng(8);
  CMatrix m(3, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
  m /= 4.0 * m.norm();
  const Operator T(m, X);
  EXPECT_LT(max_abs(phi_alpha(T, 0.0).op.matrix() - m), 1e-15);
  const cplx a{0.3, -0.4};
  EXPECT_LT(max_abs(phi_alpha(phi_alpha(T, -a).op, a).op.matrix() - m), 1e-8);
  EXPECT_FALSE(phi_alpha(T, a).flagged);
}

TEST(Shifts, MobiusDichotomy) {
  Rng rng(1);
  const Space H = Space::lp(3, 2.0);
  for (int t = 0; t < 10; ++t) {
    CMatrix m(3, 3);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.complex_normal();
    Eigen::BDCSVD<CMatrix> svd(m);
    const Operator T(m / svd.singularValues()[0], H);
    EXPECT_LE(operator_norm(phi_alpha(T, std::polar(rng.uniform(0.0, 0.9), rng.uniform(0.0, 6.0))).op).value,
              1.0 + 1e-9);
  }
  const Operator R(CMatrix{{0.0, 0.0}, {0.99, 0.0}}, Space::lp(2, 3.0));
  EXPECT_GT(mobius_norm_search(R, 20, 1).norm, 1.0 + 1e-3);
}

TEST(Shifts, BilateralPhiTwoBlockWitness) {
  const Certificate c = bilateral_phi_search(Space::lp(2, 3.0), 3, 10, 1);
  EXPECT_EQ(c.verdict, "expansive");
  EXPECT_GT(c.value, 1e-4);
  // for unit x, y the two squared norms differ by |x - a y|^2 - |y - conj(a) x|^2
  const Space X = Space::lp(2, 3.0);
  CVector x = vec({1.0, 0.2}), y = vec({0.1, -1.0});
  x /= X.norm(x);
  y /= X.norm(y);
  const TwoBlockProbe p = bilateral_phi_probe(X, 3, cplx{0.3, 0.2}, x, y);
  EXPECT_NEAR(p.phi_norm * p.phi_norm - p.input_norm * p.input_norm,
              p.forward * p.forward - p.backward * p.backward, 1e-12);
  // over l2^1 the bilateral phi is a contraction on the two-block shape
  const Certificate h = bilateral_phi_search(Space::lp(1, 2.0), 3, 10, 1);
  EXPECT_LE(h.value, 1e-9);
}

TEST(Shifts, SpectrumProbe) {
  const SigmaShiftBundle b2 = make_sigma_shift(Space::lp(1, 2.0), 200);
  EXPECT_LE(spectrum_probe(b2, 1.0, 199, 1).residual, 0.1);
  EXPECT_GE(spectrum_probe(b2, 0.5, 199, 1).residual, 0.5 - 1e-12);
  const SigmaShiftBundle b3 = make_sigma_shift(Space::lp(1, 3.0), 200);
  EXPECT_LE(spectrum_probe(b3, std::polar(1.0, std::numbers::pi / 3), 199, 1).residual, 0.15);
  double prev = kInf;
  for (int h : {50, 100, 200}) {
    const double r = spectrum_probe(make_sigma_shift(Space::lp(1, 3.0), h), 1.0, h - 1, 1).residual;
    EXPECT_LE(r, prev + 1e-12);
    prev = r;
  }
}

TEST(Shifts, SpectrumCsvSchema) {
  const std::string csv = spectrum_csv({{cplx{1.0, 0.0}, 0.01, 49}, {cplx{0.0, 0.5}, 0.5, 49}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda_re,lambda_im,residual,horizon");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Shifts, AdjointsOfShifts) {
  const Space X = Space::lp(2, 3.0);
  const Operator M = make_unilateral_shift(X, 6), B = make_backward_shift(X, 6);
  Rng rng(4);
  for (int s = 0; s < 5; ++s) {
    CVector x = rng.gaussian(12);
    x.tail(2).setZero();
    EXPECT_LT((star_adjoint_eval(M, x) - B(x)).norm(), 1e-12);
  }
  const Operator U = make_bilateral_shift(X, 6);
  for (int s = 0; s < 5; ++s) {
    CVector x = rng.gaussian(U.domain().dim());
    x.head(2).setZero();
    EXPECT_LT((star_adjoint_eval(U, x) - U.matrix().adjoint() * x).norm(), 1e-12);
  }
}
