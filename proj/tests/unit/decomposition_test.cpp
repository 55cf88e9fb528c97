#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace bjlab;
using namespace testing_helpers;

namespace {

Operator gallery(int window) {
  std::vector<int> t(static_cast<std::size_t>(window));
  CVector c(window);
  for (int i = 0; i < window; ++i) {
    t[static_cast<std::size_t>(i)] = i % 4 == 3 ? i + 4 : i;
    c[i] = i % 2 == 0 ? std::pow(2.0, -(i / 2 + 1)) : 1.0;
  }
  return monomial(Space::lp(window, 3.0), t, c);
}

std::vector<int> where(int n, auto pred) {
  std::vector<int> r;
  for (int i = 0; i < n; ++i)
    if (pred(i)) r.push_back(i);
  return r;
}

DilationBundle nagy_bundle(const Operator& T) {
  SearchOptions o;
  o.budget = 100;
  return build_min_dilation(T, triangle_violation_search(T, o), 6);
}

}  // namespace

TEST(Decomposition, IsometrySubspaceViaBundle) {
  const Space X = Space::lp(2, 2.0);
  const DilationBundle b = nagy_bundle(diagonal(X, vec({1.0, 0.5})));
  for (int n = 1; n <= 4; ++n) EXPECT_LT(distance(isometry_subspace(b, n), Subspace::coordinates(X, {0})), 1e-9) << n;
  const DilationBundle z = nagy_bundle(Operator(CMatrix::Zero(2, 2), X));
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(isometry_subspace(z, n).dim(), 0);
  const DilationBundle u = nagy_bundle(diagonal(X, vec({1.0, {0.0, 1.0}})));
  EXPECT_EQ(isometry_subspace(u, 3).dim(), 2);
  EXPECT_THROW(isometry_subspace(b, 50), LabError);
  EXPECT_EQ(x_of_T(b, 4).space.dim(), 1);
}

TEST(Decomposition, StructuralXofT) {
  const Space X = Space::lp(3, 1.0);
  const IsometrySet bad = x_of_T(monomial(X, {0, 0, 2}, vec({1.0, -1.0, 1.0})), 4);
  EXPECT_FALSE(bad.is_subspace);
  const IsometrySet iso = x_of_T(monomial(X, {1, 2, 0}, vec({1.0, {0.0, 1.0}, -1.0})), 6);
  EXPECT_TRUE(iso.is_subspace);
  EXPECT_EQ(iso.space.dim(), 3);
  const Operator G = gallery(64);
  const IsometrySet g = x_of_T(G, 8);
  EXPECT_TRUE(g.is_subspace);
  EXPECT_LT(distance(g.space, Subspace::coordinates(G.domain(), where(64, [](int i) { return i % 2 == 1; }))), 1e-12);
}

TEST(Decomposition, WoldOfShift) {
  const Operator M = make_unilateral_shift(Space::lp(2, 3.0), 6);
  const DecompositionResult r = wold_decompose(M, 6, 1);
  EXPECT_EQ(r.part("X1").dim(), 0);
  EXPECT_EQ(r.part("X2").dim(), 12);
  EXPECT_EQ(r.check.verdict, "pass");
}

TEST(Decomposition, WoldOfUnitaryPlusShift) {
  const Space X = Space::lp(6, 3.0);
  // e0, e1 phase-unitary block; e2 -> e3 -> e4 -> e5 shift
  const Operator V = monomial(X, {1, 0, 3, 4, 5, 6}, vec({{0.0, 1.0}, 1.0, 1.0, 1.0, 1.0, 1.0}));
  const DecompositionResult r = wold_decompose(V, 3, 1);
  EXPECT_LT(distance(r.part("X1"), Subspace::coordinates(X, {0, 1})), 1e-12);
  EXPECT_LT(distance(r.part("X2"), Subspace::coordinates(X, {2, 3, 4, 5})), 1e-12);
  EXPECT_LT(distance(r.part("L"), Subspace::coordinates(X, {2})), 1e-12);
  EXPECT_EQ(r.check.verdict, "pass");
}

TEST(Decomposition, CanonicalTrivialCases) {
  const Space X = Space::lp(3, 3.0);
  const DecompositionResult u = canonical_decompose(diagonal(X, vec({1.0, -1.0, {0.0, 1.0}})), 4);
  EXPECT_EQ(u.part("W").dim(), 3);
  EXPECT_EQ(u.part("W'").dim(), 0);
  const DecompositionResult s = canonical_decompose(diagonal(X, vec({0.5, 0.2, 0.9})), 4);
  EXPECT_EQ(s.part("W").dim(), 0);
  EXPECT_EQ(s.check.verdict, "pass");
}

TEST(Decomposition, CanonicalGallery) {
  const Operator T = gallery(64);
  const auto safe = where(64, [](int i) { return i + 6 < 64; });
  const DecompositionResult r = canonical_decompose(T, 8, safe, 1);
  const Space& X = T.domain();
  EXPECT_LT(distance(r.part("X(T)|safe"), Subspace::coordinates(X, where(64, [](int i) {
                                                                  return i % 2 == 1 && i + 6 < 64;
                                                                }))),
            1e-8);
  EXPECT_LT(distance(r.part("W|safe"), Subspace::coordinates(X, where(64, [](int i) {
                                                               return i % 4 == 1 && i + 6 < 64;
                                                             }))),
            1e-8);
  EXPECT_EQ(r.check.verdict, "pass");
  EXPECT_EQ(maximality_check(T, r.part("W"), 20, 1).verdict, "pass");
  // a strictly smaller W misses unitary pieces
  EXPECT_EQ(maximality_check(T, Subspace::coordinates(X, {1}), 20, 1).verdict, "fail");
}

TEST(Decomposition, LevanTrivialCases) {
  const Operator M = make_unilateral_shift(Space::lp(2, 3.0), 6);
  const DecompositionResult s = levan_decompose(M, 4);
  EXPECT_EQ(s.part("W1").dim(), 0);
  EXPECT_EQ(s.part("W2").dim(), 12);
  EXPECT_EQ(s.part("W'").dim(), 0);

  const Space X = Space::lp(4, 3.0);
  const DecompositionResult c = levan_decompose(diagonal(X, vec({0.5, 0.3, 1.0, {0.0, 1.0}})), 4);
  EXPECT_LT(distance(c.part("W1"), Subspace::coordinates(X, {2, 3})), 1e-12);
  EXPECT_EQ(c.part("W2").dim(), 0);
  EXPECT_LT(distance(c.part("W'"), Subspace::coordinates(X, {0, 1})), 1e-12);
}

TEST(Decomposition, LevanGallery) {
  const Operator T = gallery(64);
  const auto safe = where(64, [](int i) { return i + 6 < 64; });
  const DecompositionResult r = levan_decompose(T, 8, safe, 1);
  const Space& X = T.domain();
  EXPECT_LT(distance(r.part("W2"), Subspace::coordinates(X, where(64, [](int i) { return i % 4 == 3; }))), 1e-8);
  EXPECT_LT(distance(r.part("W'"), Subspace::coordinates(X, where(64, [](int i) { return i % 2 == 0; }))), 1e-8);
  EXPECT_EQ(r.check.verdict, "pass");
}

TEST(Decomposition, JsonHasPartsAndResiduals) {
  const DecompositionResult r = wold_decompose(make_unilateral_shift(Space::lp(1, 3.0), 4), 4, 1);
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j.at("kind"), "wold");
  EXPECT_TRUE(j.at("parts").contains("X2"));
  EXPECT_TRUE(j.contains("residuals"));
}
