#include "bjlab/dilation.hpp"

#include <algorithm>
#include <cmath>

#include "bjlab/operators.hpp"
#include "bjlab/random.hpp"
#include "bjlab/subspace.hpp"

namespace bjlab {

double triangle_margin(const Operator& T, const CVector& x, const CVector& y) {
  return a_T(T, x) + a_T(T, y) - a_T(T, x + y);
}

namespace {

CVector normalized(const Space& s, const CVector& v) {
  const double n = s.norm(v);
  return n > 0.0 ? CVector(v / n) : v;
}

}  // namespace

NormCertificate triangle_violation_search(const Operator& T, const SearchOptions& opt) {
  if (!T.square()) throw PreconditionError("operator", "A_T needs an operator on one space");
  const Space& X = T.domain();
  const NormEstimate est = operator_norm(T, 32, opt.seed);
  if (est.value > 1.0 + 1e-9) throw PreconditionError("contraction", "not a contraction: |T| >= " + std::to_string(est.value));

  NormCertificate cert;
  cert.id = opt.id;
  cert.op = T.matrix();
  cert.seed = opt.seed;
  double best = kInf;
  CVector bx, by;
  auto consider = [&](const CVector& x, const CVector& y) {
    const double m = triangle_margin(T, x, y);
    ++cert.trials;
    if (m < best) {
      best = m;
      bx = x;
      by = y;
    }
  };

  // structured seeds: coordinate pairs with phases, then supplied witnesses
  const cplx phases[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  const int n = X.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (const cplx c : phases) {
        CVector x = CVector::Zero(n), y = CVector::Zero(n);
        x[i] = 1.0;
        y[j] = c;
        consider(normalized(X, x), normalized(X, y));
      }
  for (const auto& [x, y] : opt.seeds) consider(normalized(X, x), normalized(X, y));

  if (best >= -1e-9) {
    // random descent over pairs (x, t y) with unit x, y and t in (0, 1]
    Rng rng(opt.seed);
    const int per_start = 200;
    for (int used = 0; used < opt.budget; used += per_start) {
      CVector x = rng.unit(X), y = rng.unit(X);
      double t = rng.uniform(0.05, 1.0);
      double cur = triangle_margin(T, x, t * y);
      double sigma = 0.3;
      for (int it = 0; it < per_start && sigma > 1e-10; ++it) {
        CVector xn = normalized(X, x + sigma * rng.gaussian(n));
        CVector yn = normalized(X, y + sigma * rng.gaussian(n));
        const double tn = std::clamp(t + sigma * rng.normal(), 1e-3, 1.0);
        const double m = triangle_margin(T, xn, tn * yn);
        ++cert.trials;
        if (m < cur) {
          cur = m;
          x = xn;
          y = yn;
          t = tn;
          sigma *= 1.5;
        } else {
          sigma *= 0.85;
        }
      }
      if (cur < best) {
        best = cur;
        bx = x;
        by = t * y;
      }
    }
  }

  cert.margin = best;
  if (best < -1e-9) {
    cert.verdict = NormVerdict::violation;
    cert.witness_x = bx;
    cert.witness_y = by;
    cert.margin = triangle_margin(T, bx, by);
  } else {
    cert.verdict = NormVerdict::norm;
  }
  // positivity: the minimum of A_T on the unit sphere sits where |Tx| is maximal
  if (est.witness.size()) {
    const CVector w = normalized(X, est.witness);
    cert.min_on_sphere = a_T(T, w);
  } else {
    cert.min_on_sphere = 1.0;
  }
  if (cert.verdict == NormVerdict::norm && cert.min_on_sphere < 1e-9) {
    cert.verdict = NormVerdict::semi_norm;
    cert.positivity_witness = normalized(X, est.witness);
  }
  return cert;
}

LambdaWindow lambda_window(double p) {
  if (!(p > 1.0) || p == 2.0 || std::isinf(p))
    throw PreconditionError("exponent", "the two-coordinate window needs 1 < p < inf, p != 2");
  if (p < 2.0) return {std::sqrt(1.0 - std::pow(2.0, 2.0 / p - 2.0)), std::pow(2.0, 1.0 / p - 1.0)};
  return {std::sqrt(1.0 - std::pow(2.0, -2.0 / p)), std::pow(2.0, -1.0 / p)};
}

DilationBundle build_min_dilation(const Operator& T, const NormCertificate& cert, int depth) {
  if (!T.square()) throw PreconditionError("operator", "dilation needs an operator on one space");
  if (depth < 2) throw PreconditionError("depth", "depth must be at least 2");
  if (cert.verdict == NormVerdict::violation)
    throw PreconditionError("certificate", "A_T violates the triangle inequality; no isometric dilation exists");
  if (cert.op.rows() != T.matrix().rows() || (cert.op - T.matrix()).cwiseAbs().maxCoeff() > 1e-14)
    throw PreconditionError("certificate", "certificate was issued for a different operator");
  const Space& X = T.domain();
  const int n = X.dim();
  const Space Z = Space::direct_sum({X, Space::renormed(X, cert)});
  const Space K = Space::block_seq(Z, depth);
  const int d = 2 * n;
  CMatrix V = CMatrix::Zero(K.dim(), K.dim());
  V.block(0, 0, n, n) = T.matrix();
  V.block(n, n, n, n).setIdentity();
  V.block(d + n, 0, n, n).setIdentity();
  for (int j = 1; j + 1 < depth; ++j) V.block((j + 1) * d, j * d, d, d).setIdentity();
  CMatrix W = CMatrix::Zero(K.dim(), n);
  W.topRows(n).setIdentity();
  CMatrix P = CMatrix::Zero(K.dim(), K.dim());
  P.block(0, 0, n, n).setIdentity();
  DilationBundle b{"block-min", X,     K, T, Operator(V, K), Operator(W, X, K), Operator(P, K), depth, n,
                   std::nullopt, cert};
  b.defect = defect_representation(T);
  return b;
}

DilationBundle build_rowform_dilation(const Operator& T, const Operator& A, int depth) {
  if (!T.square()) throw PreconditionError("operator", "dilation needs an operator on one space");
  const Space& X = T.domain();
  const int n = X.dim();
  int m = 1;
  if (A.codomain().same_as(X)) {
    m = 1;
  } else if (A.codomain().kind() == SpaceKind::block_seq && A.codomain().base().same_as(X)) {
    m = A.codomain().blocks();
  } else {
    throw PreconditionError("representation", "A must map X into X or into BlockSeq(X, m)");
  }
  if (!A.domain().same_as(X)) throw PreconditionError("representation", "A must act on the domain of T");
  if (depth < 2 * m) throw PreconditionError("depth", "depth must be at least twice the number of A blocks");
  Rng rng(2024);
  for (int s = 0; s < 200; ++s) {
    const CVector x = rng.unit(X);
    const double err = std::abs(A.codomain().norm(A.matrix() * x) - a_T(T, x));
    if (err > 1e-8)
      throw PreconditionError("representation", "|Ax| differs from A_T(x) by " + std::to_string(err));
  }
  const Space K = Space::block_seq(X, depth);
  CMatrix V = CMatrix::Zero(K.dim(), K.dim());
  V.block(0, 0, n, n) = T.matrix();
  for (int j = 0; j < m; ++j) V.block((2 * j + 1) * n, 0, n, n) = A.matrix().block(j * n, 0, n, n);
  for (int j = 0; 2 * j + 2 < depth; ++j) V.block((2 * j + 2) * n, (j + 1) * n, n, n).setIdentity();
  CMatrix W = CMatrix::Zero(K.dim(), n);
  W.topRows(n).setIdentity();
  CMatrix P = CMatrix::Zero(K.dim(), K.dim());
  P.block(0, 0, n, n).setIdentity();
  const int rank = static_cast<int>(orthonormal_frame(A.matrix(), 1e-10).cols());
  return DilationBundle{"rowform",         X,     K, T, Operator(V, K), Operator(W, X, K), Operator(P, K), depth, rank,
                        A, std::nullopt};
}

Certificate verify_dilation(const DilationBundle& b, int kmax, double tol, std::uint64_t seed) {
  if (kmax + 1 > b.depth)
    throw PreconditionError("horizon", "kmax + 1 exceeds the truncation depth " + std::to_string(b.depth));
  Certificate c;
  c.check = "dilation";
  c.seed = seed;
  const Space& X = b.X;
  const Space& K = b.K;
  const CMatrix& V = b.V.matrix();
  const CMatrix& W = b.W.matrix();
  const CMatrix& P = b.P.matrix();
  const CMatrix& T = b.T.matrix();
  Rng rng(seed);

  double worst = 0.0;
  int worst_k = 0;
  CVector worst_x;
  double w_iso = 0.0;
  for (int s = 0; s < 100; ++s) {
    const CVector x = rng.unit(X);
    w_iso = std::max(w_iso, std::abs(K.norm(W * x) - X.norm(x)));
    CVector vk = W * x;  // V^k W x
    CVector tk = x;      // T^k x
    for (int k = 0; k <= kmax; ++k) {
      const CVector diff = P * vk - W * tk;
      const double r = std::max(K.norm(diff), diff.cwiseAbs().maxCoeff());
      ++c.trials;
      if (r > worst) {
        worst = r;
        worst_k = k;
        worst_x = x;
      }
      vk = V * vk;
      tk = T * tk;
    }
  }

  // V on boundary-safe inputs: block-min drops the last block, rowform drops blocks past (depth-1)/2
  const int nb = K.blocks();
  const int bd = K.block_dim();
  int safe_blocks = b.construction == "rowform" ? (b.depth - 1) / 2 + 1 : nb - 1;
  safe_blocks = std::max(1, std::min(safe_blocks, nb - 1));
  double v_iso = 0.0, p_excess = 0.0;
  CVector v_witness;
  for (int s = 0; s < 100; ++s) {
    CVector y = rng.gaussian(K.dim());
    y.tail((nb - safe_blocks) * bd).setZero();
    const double ny = K.norm(y);
    if (ny == 0.0) continue;
    const double e = std::abs(K.norm(V * y) - ny) / ny;
    if (e > v_iso) v_iso = e, v_witness = y / ny;
    p_excess = std::max(p_excess, K.norm(P * y) / ny - 1.0);
  }
  // localize: first boundary-safe coordinate vector that V does not preserve
  int v_coord = -1;
  if (v_iso > tol)
    for (int j = 0; j < safe_blocks * bd && v_coord < 0; ++j) {
      CVector e = CVector::Zero(K.dim());
      e[j] = 1.0;
      const double ne = K.norm(e);
      if (std::abs(K.norm(V * e) - ne) > tol * ne) {
        v_coord = j;
        v_witness = e / ne;
      }
    }
  const double idem = (P * P - P).cwiseAbs().maxCoeff();

  // minimality: rank of [W, VW, ..., V^kmax W]
  const int n = X.dim();
  CMatrix span(K.dim(), n * (kmax + 1));
  CMatrix cur = W;
  for (int k = 0; k <= kmax; ++k) {
    span.middleCols(k * n, n) = cur;
    cur = V * cur;
  }
  const int rank = static_cast<int>(orthonormal_frame(span, 1e-10).cols());
  const int expected = n + kmax * b.residual_rank;

  c.value = worst;
  c.residuals = {worst, w_iso, v_iso, idem, p_excess, static_cast<double>(rank), static_cast<double>(expected)};
  std::string fail;
  if (worst > tol) fail = "dilation identity fails at k = " + std::to_string(worst_k);
  else if (w_iso > tol) fail = "W is not isometric";
  else if (v_iso > tol)
    fail = "V is not isometric on boundary-safe vectors" +
           (v_coord >= 0 ? " (coordinate " + std::to_string(v_coord) + ", block " + std::to_string(v_coord / bd) + ")"
                         : std::string());
  else if (idem > tol) fail = "P is not idempotent";
  else if (p_excess > 1e-12) fail = "P increases a norm";
  else if (b.construction == "block-min" && rank != expected)
    fail = "span of V^k W X has dimension " + std::to_string(rank) + ", expected " + std::to_string(expected);
  c.verdict = fail.empty() ? "pass" : "fail";
  c.note = fail.empty() ? "construction " + b.construction + ", kmax " + std::to_string(kmax) : fail;
  if (worst > tol || v_iso <= tol) {
    if (worst_x.size()) c.witnesses = {worst_x, CVector::Constant(1, static_cast<double>(worst_k))};
  } else {
    c.witnesses = {v_witness};
  }
  return c;
}

std::optional<Operator> defect_representation(const Operator& T) {
  if (!T.square()) throw PreconditionError("operator", "defect representation needs an operator on one space");
  const Space& X = T.domain();
  const int n = X.dim();
  if (T.matrix().isZero(0.0)) return identity(X);
  if (const auto w = X.euclidean_weights()) {
    const RVector g = w->cwiseSqrt();
    const CMatrix GT = g.asDiagonal() * T.matrix();
    CMatrix M = CMatrix(w->cast<cplx>().asDiagonal()) - GT.adjoint() * GT;
    M = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(M);
    RVector ev = es.eigenvalues();
    const double scale = std::max(1.0, std::abs(M.trace()));
    if (ev.minCoeff() < -1e-9 * scale)
      throw PreconditionError("contraction", "not a contraction: I - T*T has eigenvalue " + std::to_string(ev.minCoeff()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(0.0, ev[i]));
    const CMatrix root = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    return Operator(g.cwiseInverse().asDiagonal() * root, X);
  }
  if (const auto* dg = std::get_if<DiagonalTag>(&T.annotation())) {
    if (!X.is_lp_family()) return std::nullopt;
    for (const auto& [off, leaf] : X.lp_leaves()) {
      const double a = std::abs(dg->values[off]);
      for (int i = 1; i < leaf.dim(); ++i)
        if (std::abs(std::abs(dg->values[off + i]) - a) > 1e-14) return std::nullopt;
    }
    CVector mu(n);
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(dg->values[i]);
      if (a > 1.0 + 1e-9) throw PreconditionError("contraction", "not a contraction: |lambda| > 1");
      mu[i] = std::sqrt(std::max(0.0, 1.0 - a * a));
    }
    return diagonal(X, mu);
  }
  return std::nullopt;
}

Operator nagy_backward_intertwiner(const Operator& T, int depth) {
  const Space& X = T.domain();
  if (!T.square() || !X.euclidean_weights())
    throw PreconditionError("hilbert", "the intertwiner is built for Hilbert-space operators");
  if (depth < 1) throw PreconditionError("depth", "depth must be positive");
  const NormEstimate ne = operator_norm(T);
  if (ne.value >= 1.0) throw PreconditionError("contraction", "not a strict contraction: |T| = " + std::to_string(ne.value));
  const Operator D = *defect_representation(T);
  const int n = X.dim();
  const Space K = Space::block_seq(X, depth);
  CMatrix W(K.dim(), n);
  CMatrix Tk = CMatrix::Identity(n, n);
  for (int k = 0; k < depth; ++k) {
    W.middleRows(k * n, n) = D.matrix() * Tk;
    Tk = T.matrix() * Tk;
  }
  return Operator(W, X, K);
}

}  // namespace bjlab
