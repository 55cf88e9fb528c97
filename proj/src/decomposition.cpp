#include "bjlab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "bjlab/operators.hpp"
#include "bjlab/orthogonality.hpp"
#include "bjlab/random.hpp"

namespace bjlab {

namespace {

CMatrix matrix_power(const CMatrix& m, int n) {
  CMatrix r = CMatrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < n; ++k) r = m * r;
  return r;
}

// worst relative |T^n x| - |x| over n = 1..nmax
double orbit_defect(const Space& X, const CMatrix& T, const CVector& x, int nmax) {
  const double nx = X.norm(x);
  double worst = 0.0;
  CVector v = x;
  for (int n = 1; n <= nmax; ++n) {
    v = T * v;
    worst = std::max(worst, std::abs(X.norm(v) - nx) / nx);
  }
  return worst;
}

// Coordinate model of an annotated operator: target (-1 = killed, kExit = leaves window) and coefficient.
constexpr int kExit = -2;

struct CoordinateMap {
  std::vector<int> target;
  CVector coeff;
};

std::optional<CoordinateMap> coordinate_map(const Operator& T) {
  const Space& X = T.domain();
  const int n = X.dim();
  CoordinateMap m{std::vector<int>(static_cast<std::size_t>(n)), CVector::Ones(n)};
  if (const auto* d = std::get_if<DiagonalTag>(&T.annotation())) {
    for (int j = 0; j < n; ++j) m.target[static_cast<std::size_t>(j)] = j;
    m.coeff = d->values;
  } else if (const auto* mo = std::get_if<MonomialTag>(&T.annotation())) {
    for (int j = 0; j < n; ++j) {
      const int t = mo->targets[static_cast<std::size_t>(j)];
      m.target[static_cast<std::size_t>(j)] = t < 0 ? -1 : (t >= n ? kExit : t);
    }
    m.coeff = mo->coeffs;
  } else if (const auto* sh = std::get_if<ShiftTag>(&T.annotation())) {
    const bool bilateral = X.kind() == SpaceKind::bi_block_seq;
    const int d = X.block_dim();
    for (int j = 0; j < n; ++j) {
      const int t = j + sh->step * d;
      int& slot = m.target[static_cast<std::size_t>(j)];
      if (t >= n)
        slot = kExit;
      else if (t < 0)
        slot = bilateral ? kExit : -1;
      else
        slot = t;
    }
  } else {
    return std::nullopt;
  }
  return m;
}

CVector unit_vector(int n, int i) {
  CVector e = CVector::Zero(n);
  e[i] = 1.0;
  return e;
}

// frame columns of a subspace embedded via T, checked against the subspace
double invariance_residual(const CMatrix& T, const Subspace& S) {
  if (S.dim() == 0) return 0.0;
  const CMatrix img = T * S.frame();
  const CMatrix res = img - S.frame() * (S.frame().adjoint() * img);
  return res.cwiseAbs().maxCoeff();
}

}  // namespace

Subspace isometry_subspace(const DilationBundle& b, int n) {
  if (n < 1) throw PreconditionError("horizon", "n must be at least 1");
  if (n >= b.depth) throw PreconditionError("horizon", "n exceeds the verified dilation depth");
  const Space& X = b.X;
  const CMatrix& T = b.T.matrix();
  CMatrix kernel;
  if (b.defect) {
    // |x|^2 - |T^n x|^2 = sum_{k<n} A_T(T^k x)^2, so the set is ker [A; AT; ...; AT^{n-1}]
    const CMatrix& A = b.defect->matrix();
    CMatrix stack(A.rows() * n, X.dim());
    CMatrix Tk = CMatrix::Identity(X.dim(), X.dim());
    for (int k = 0; k < n; ++k) {
      stack.middleRows(A.rows() * k, A.rows()) = A * Tk;
      Tk = T * Tk;
    }
    kernel = kernel_frame(stack, 1e-9);
  } else if (b.K.euclidean_weights()) {
    const CMatrix IP = CMatrix::Identity(b.K.dim(), b.K.dim()) - b.P.matrix();
    kernel = kernel_frame(IP * matrix_power(b.V.matrix(), n) * b.W.matrix(), 1e-9);
  } else {
    throw PreconditionError("defect", "bundle has neither a defect representation nor a Euclidean dilation space");
  }
  const Subspace S = Subspace::from_columns(X, kernel);
  const CMatrix Tn = matrix_power(T, n);
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const CVector x = kernel.col(c);
    if (std::abs(X.norm(Tn * x) - X.norm(x)) > 1e-8 * std::max(1.0, X.norm(x)))
      throw InconsistentError("kernel vector is not isometric under T^" + std::to_string(n));
  }
  return S;
}

IsometrySet x_of_T(const DilationBundle& b, int nmax) {
  Subspace S = Subspace::whole(b.X);
  for (int n = 1; n <= nmax; ++n) S = intersect(S, isometry_subspace(b, n));
  return IsometrySet{S, true, CVector(), "dilation", nmax, {}, {}};
}

IsometrySet x_of_T(const Operator& T, int nmax) {
  if (!T.square()) throw PreconditionError("operator", "X(T) needs an operator on one space");
  const auto map = coordinate_map(T);
  if (!map) throw PreconditionError("annotation", "structural X(T) needs a diagonal, monomial or shift annotation");
  const Space& X = T.domain();
  const int dim = X.dim();
  IsometrySet out{Subspace::zero(X), true, CVector(), "structural", nmax, {}, {}};
  std::vector<int> safe;
  for (int j = 0; j < dim; ++j) {
    const double base = X.norm(unit_vector(dim, j));
    int cur = j;
    cplx c = 1.0;
    bool iso = true, exited = false;
    for (int n = 1; n <= nmax; ++n) {
      const int t = map->target[static_cast<std::size_t>(cur)];
      if (t == kExit) {
        exited = true;
        break;
      }
      if (t < 0) {
        iso = false;
        break;
      }
      c *= map->coeff[cur];
      cur = t;
      if (std::abs(X.norm(c * unit_vector(dim, cur)) - base) > 1e-12 * base) {
        iso = false;
        break;
      }
    }
    if (!iso) continue;
    out.coordinates.push_back(j);
    if (exited)
      out.exits.push_back(j);
    else
      safe.push_back(j);
  }
  out.space = Subspace::coordinates(X, out.coordinates);

  // closure sampling on boundary-safe candidates
  const CMatrix& M = T.matrix();
  auto fails = [&](const CVector& x) { return orbit_defect(X, M, x, nmax) > 1e-9; };
  int pairs = 0;
  for (std::size_t a = 0; a < safe.size() && out.is_subspace && pairs < 2000; ++a)
    for (std::size_t b = a + 1; b < safe.size() && pairs < 2000; ++b, ++pairs)
      for (double s : {1.0, -1.0}) {
        CVector x = unit_vector(dim, safe[a]) + s * unit_vector(dim, safe[b]);
        if (fails(x)) {
          out.is_subspace = false;
          out.counterexample = x / X.norm(x);
          break;
        }
      }
  if (out.is_subspace && safe.size() > 1) {
    const Subspace S = Subspace::coordinates(X, safe);
    for (int s = 0; s < 32; ++s) {
      const CVector x = S.sample_unit(static_cast<std::uint64_t>(1000 + s));
      if (fails(x)) {
        out.is_subspace = false;
        out.counterexample = x;
        break;
      }
    }
  }
  return out;
}

const Subspace& DecompositionResult::part(const std::string& name) const {
  for (const auto& [k, s] : parts)
    if (k == name) return s;
  throw LabError("part", "no part named " + name);
}

double DecompositionResult::residual(const std::string& name) const {
  for (const auto& [k, v] : residuals)
    if (k == name) return v;
  throw LabError("residual", "no residual named " + name);
}

DecompositionResult wold_decompose(const Operator& V, const Subspace& domain, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw PreconditionError("horizon", "horizon must be positive");
  if (!domain.ambient().same_as(V.domain())) throw DimensionError("domain subspace lives in another space");
  const Operator A = left_inverse(V);  // refuses unannotated operators
  const Space& X = V.domain();
  const CMatrix& Vm = V.matrix();
  const CMatrix& Am = A.matrix();

  Subspace X1 = domain;
  CMatrix Vn = CMatrix::Identity(X.dim(), X.dim()), An = Vn;
  for (int n = 1; n <= horizon && X1.dim() > 0; ++n) {
    Vn = Vm * Vn;
    An = Am * An;
    X1 = intersect(X1, image(Vn, domain));
    X1 = intersect(X1, image(An, domain));
  }
  const Subspace L = intersect(Subspace::from_columns(X, kernel_frame(Am, 1e-9)), domain);
  Subspace X2 = L;
  CMatrix VnL = L.frame();
  for (int n = 1; n <= horizon && L.dim() > 0; ++n) {
    VnL = Vm * VnL;
    if (VnL.cwiseAbs().maxCoeff() == 0.0) break;
    X2 = sum(X2, Subspace::from_columns(X, VnL));
  }

  DecompositionResult r;
  r.kind = "wold";
  r.parts = {{"X1", X1}, {"X2", X2}, {"L", L}};
  Rng rng(seed);
  // V on X1: isometric and onto
  double iso = 0.0;
  for (int s = 0; s < 20 && X1.dim() > 0; ++s) {
    const CVector x = X1.sample_unit(rng.next_seed());
    iso = std::max(iso, std::abs(X.norm(Vm * x) - 1.0));
  }
  const double onto = X1.dim() > 0 ? distance(image(Vm, X1), X1) : 0.0;
  const double overlap = intersect(X1, X2).dim();
  const double dims = std::abs(X1.dim() + X2.dim() - domain.dim());
  // wandering: V^n L ⊥_B L and range(V) ⊥_B L
  double wander = 0.0;
  Certificate wc;
  if (L.dim() > 0) {
    CMatrix W = L.frame();
    for (int n = 1; n <= std::min(horizon, 3); ++n) {
      W = Vm * W;
      if (W.cwiseAbs().maxCoeff() == 0.0) break;
      const Certificate c = bj_subspace(Subspace::from_columns(X, W), L, 6, rng.next_seed());
      wander = std::max(wander, c.value);
      if (c.verdict != "orthogonal") wc = c;
    }
    const Certificate rc = bj_subspace(image(Vm, domain), L, 8, rng.next_seed());
    wander = std::max(wander, rc.value);
    if (rc.verdict != "orthogonal") wc = rc;
  }
  r.residuals = {{"isometry", iso}, {"onto", onto}, {"overlap", overlap}, {"dimension", dims}, {"wandering", wander}};
  r.check.check = "wold";
  r.check.seed = seed;
  r.check.value = std::max({iso, onto, overlap, dims, wander});
  r.check.witnesses = wc.witnesses;
  r.check.verdict = (iso <= 1e-10 && onto <= 1e-9 && overlap == 0 && dims == 0 && wander <= 1e-9) ? "pass" : "fail";
  return r;
}

DecompositionResult wold_decompose(const Operator& V, int horizon, std::uint64_t seed) {
  return wold_decompose(V, Subspace::whole(V.domain()), horizon, seed);
}

namespace {

// T restricted to the coordinate subspace C, as a monomial on the ambient (zero off C).
Operator restrict_to_coordinates(const Operator& T, const std::vector<int>& C) {
  if (C.size() == static_cast<std::size_t>(T.domain().dim()) && std::holds_alternative<ShiftTag>(T.annotation()))
    return T;
  const auto map = coordinate_map(T);
  const int n = T.domain().dim();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int j : C) in[static_cast<std::size_t>(j)] = true;
  std::vector<int> targets(static_cast<std::size_t>(n), -1);
  CVector coeffs = CVector::Zero(n);
  for (int j : C) {
    const int t = map->target[static_cast<std::size_t>(j)];
    if (t >= 0 && !in[static_cast<std::size_t>(t)])
      throw PreconditionError("invariance", "X(T) is not T-invariant at coordinate " + std::to_string(j));
    targets[static_cast<std::size_t>(j)] = t == kExit ? n : t;
    coeffs[j] = map->coeff[j];
  }
  return monomial(T.domain(), targets, coeffs);
}

// sup over sampled unit x in S of min_n |T^n x| / |x|; a unitary piece would reach 1
double best_isometric_ratio(const Space& X, const CMatrix& T, const Subspace& S, int nmax, Rng& rng) {
  if (S.dim() == 0) return 0.0;
  auto score = [&](const CVector& x) {
    const double nx = X.norm(x);
    double worst = 1.0;
    CVector v = x;
    for (int n = 1; n <= nmax; ++n) {
      v = T * v;
      worst = std::min(worst, X.norm(v) / nx);
    }
    return worst;
  };
  double best = 0.0;
  CVector bx;
  for (int s = 0; s < 40; ++s) {
    const CVector x = S.sample_unit(rng.next_seed());
    const double v = score(x);
    if (v > best) best = v, bx = x;
  }
  for (int i = 0; i < S.dim(); ++i) {
    const CVector x = S.frame().col(i);
    const double v = score(x);
    if (v > best) best = v, bx = x;
  }
  double sigma = 0.2;
  for (int it = 0; it < 200 && sigma > 1e-8; ++it) {
    const CVector x = bx + sigma * (S.frame() * rng.gaussian(S.dim()));
    const double v = score(x);
    if (v > best) {
      best = v;
      bx = x;
      sigma *= 1.3;
    } else {
      sigma *= 0.9;
    }
  }
  return best;
}

}  // namespace

DecompositionResult canonical_decompose(const Operator& T, int nmax, const std::vector<int>& safe, std::uint64_t seed) {
  const IsometrySet xs = x_of_T(T, nmax);
  if (!xs.is_subspace) throw PreconditionError("x-of-T", "X(T) is not a linear subspace");
  const Space& X = T.domain();
  const Operator Tt = restrict_to_coordinates(T, xs.coordinates);
  Operator A = Tt;  // X(T) = {0}: nothing to invert
  if (!xs.coordinates.empty()) try {
    A = left_inverse(Tt);
  } catch (const LabError& e) {
    throw PreconditionError("wold", std::string("T restricted to X(T) has no norm-one left inverse: ") + e.what());
  }
  const Subspace& XT = xs.space;
  Subspace W = XT;
  CMatrix Tn = CMatrix::Identity(X.dim(), X.dim()), An = Tn;
  for (int n = 1; n <= nmax && W.dim() > 0; ++n) {
    Tn = Tt.matrix() * Tn;
    An = A.matrix() * An;
    W = intersect(W, image(Tn, XT));
    W = intersect(W, image(An, XT));
  }
  const Subspace Wc = complement(W);

  DecompositionResult r;
  r.kind = "canonical";
  r.parts = {{"X(T)", XT}, {"W", W}, {"W'", Wc}};
  if (!safe.empty()) {
    const Subspace S = Subspace::coordinates(X, safe);
    r.parts.emplace_back("X(T)|safe", intersect(XT, S));
    r.parts.emplace_back("W|safe", intersect(W, S));
  }

  Rng rng(seed);
  const CMatrix& M = T.matrix();
  const double inv = invariance_residual(M, W);
  double iso = 0.0;
  for (int s = 0; s < 20 && W.dim() > 0; ++s) {
    const CVector x = W.sample_unit(rng.next_seed());
    iso = std::max(iso, std::abs(X.norm(M * x) - 1.0));
  }
  const double onto = W.dim() > 0 ? distance(image(M, W), W) : 0.0;
  // A T = I on boundary-safe vectors of X(T)
  double left = 0.0;
  for (int j : xs.coordinates) {
    if (std::find(xs.exits.begin(), xs.exits.end(), j) != xs.exits.end()) continue;
    const CVector e = unit_vector(X.dim(), j);
    left = std::max(left, (A.matrix() * (M * e) - e).cwiseAbs().maxCoeff());
  }
  // c.n.u. evidence on W': no unimodular eigenvector of T outside W
  const Certificate eig = maximality_check(T, W, 0, seed);
  r.residuals = {{"invariance", inv},   {"isometry", iso},          {"onto", onto},
                 {"left-inverse", left}, {"unitary-outside-W", eig.value}};
  r.check.check = "canonical";
  r.check.seed = seed;
  r.check.value = std::max({inv, iso, onto, left});
  r.check.note = "c.n.u. on W' is evidence at the sampled budget, not a proof";
  r.check.verdict = (inv <= 1e-9 && iso <= 1e-10 && onto <= 1e-9 && left <= 1e-12 && eig.value == 0.0) ? "pass" : "fail";
  return r;
}

DecompositionResult levan_decompose(const Operator& T, int nmax, const std::vector<int>& safe, std::uint64_t seed) {
  DecompositionResult canon = canonical_decompose(T, nmax, safe, seed);
  const IsometrySet xs = x_of_T(T, nmax);
  const Operator Tt = restrict_to_coordinates(T, xs.coordinates);
  const Space& X = T.domain();
  DecompositionResult wold;
  if (xs.space.dim() > 0) {
    wold = wold_decompose(Tt, xs.space, std::max(nmax, X.dim()), seed);
  } else {
    wold.parts = {{"X1", xs.space}, {"X2", xs.space}};
    wold.check.verdict = "pass";
  }
  const Subspace& W1 = wold.part("X1");
  const Subspace& W2 = wold.part("X2");
  const Subspace iso = sum(W1, W2);
  const Subspace Wp = complement(iso);
  Rng rng(seed + 7);
  const double cni = best_isometric_ratio(X, T.matrix(), Wp, nmax, rng);

  DecompositionResult r;
  r.kind = "levan";
  r.parts = {{"X(T)", xs.space}, {"W1", W1}, {"W2", W2}, {"W'", Wp}, {"W", canon.part("W")}};
  if (!safe.empty()) {
    const Subspace S = Subspace::coordinates(X, safe);
    r.parts.emplace_back("W1|safe", intersect(W1, S));
    r.parts.emplace_back("W2|safe", intersect(W2, S));
  }
  const double w1_vs_w = distance(W1, canon.part("W"));
  r.residuals = {{"cni-ratio", cni}, {"W1-vs-W", w1_vs_w}, {"wold", wold.check.value}, {"canonical", canon.check.value}};
  r.check.check = "levan";
  r.check.seed = seed;
  r.check.value = cni;
  r.check.note = "complete non-isometry on W' is evidence at the sampled budget, not a proof";
  const bool ok = canon.check.verdict == "pass" && wold.check.verdict == "pass" && w1_vs_w < 1e-8 &&
                  (Wp.dim() == 0 || cni <= 1.0 - 1e-6);
  r.check.verdict = ok ? "pass" : "fail";
  return r;
}

Certificate maximality_check(const Operator& T, const Subspace& W, int samples, std::uint64_t seed) {
  Certificate c;
  c.check = "maximality";
  c.seed = seed;
  const Space& X = T.domain();
  const CMatrix& M = T.matrix();
  Eigen::ComplexEigenSolver<CMatrix> es(M, false);
  std::vector<cplx> unimodular;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx mu = es.eigenvalues()[i];
    if (std::abs(std::abs(mu) - 1.0) > 1e-9) continue;
    bool seen = false;
    for (const cplx& u : unimodular) seen = seen || std::abs(u - mu) < 1e-8;
    if (!seen) unimodular.push_back(mu);
  }
  std::vector<Subspace> eigenspaces;
  for (const cplx& mu : unimodular) {
    const CMatrix K = kernel_frame(M - mu * CMatrix::Identity(X.dim(), X.dim()), 1e-9);
    if (K.cols() > 0) eigenspaces.push_back(Subspace::from_columns(X, K));
  }
  // whole eigenspaces first: anything unimodular outside W is a counterexample
  double worst = 0.0;
  for (const auto& E : eigenspaces) {
    const Subspace out = intersect(E, complement(W));
    if (!is_subset(E, W)) {
      worst = std::max(worst, 1.0);
      if (out.dim() > 0) c.witnesses.push_back(out.frame().col(0));
    }
  }
  Rng rng(seed);
  int accepted = 0;
  for (int s = 0; s < samples && !eigenspaces.empty(); ++s) {
    // direct sum of random subspaces of a few eigenspaces
    Subspace Mset = Subspace::zero(X);
    for (const auto& E : eigenspaces) {
      if (rng.uniform() < 0.5) continue;
      const int k = 1 + rng.index(E.dim());
      CMatrix cols = E.frame() * (CMatrix(E.dim(), k).unaryExpr([&](cplx) { return rng.complex_normal(); }));
      Mset = sum(Mset, Subspace::from_columns(X, cols));
    }
    if (Mset.dim() == 0) continue;
    if (invariance_residual(M, Mset) > 1e-9 || distance(image(M, Mset), Mset) > 1e-9) continue;
    double iso = 0.0;
    for (int t = 0; t < 4; ++t) {
      const CVector x = Mset.sample_unit(rng.next_seed());
      iso = std::max(iso, std::abs(X.norm(M * x) - 1.0));
    }
    if (iso > 1e-9) continue;
    ++accepted;
    const double d = Mset.dim() == 0 ? 0.0 : (Mset.frame() - W.frame() * (W.frame().adjoint() * Mset.frame())).norm();
    if (d > 1e-8 && c.witnesses.empty()) c.witnesses.push_back(Mset.frame().col(0));
    worst = std::max(worst, d);
  }
  c.trials = accepted;
  c.value = worst;
  c.verdict = worst <= 1e-8 ? "pass" : "fail";
  return c;
}

nlohmann::json to_json(const DecompositionResult& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  nlohmann::json parts = nlohmann::json::object();
  for (const auto& [name, s] : r.parts) {
    nlohmann::json basis = nlohmann::json::array();
    for (Eigen::Index c = 0; c < s.frame().cols(); ++c) basis.push_back(vector_to_json(s.frame().col(c)));
    parts[name] = {{"dim", s.dim()}, {"basis", basis}};
  }
  j["parts"] = parts;
  nlohmann::json res = nlohmann::json::object();
  for (const auto& [name, v] : r.residuals) res[name] = v;
  j["residuals"] = res;
  j["check"] = to_json(r.check);
  return j;
}

}  // namespace bjlab
