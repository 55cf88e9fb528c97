#include "bjlab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bjlab/functionals.hpp"
#include "bjlab/random.hpp"

namespace bjlab {

namespace {

double ratio(const Operator& T, const CVector& x) {
  const double nx = T.domain().norm(x);
  return nx == 0.0 ? 0.0 : T.codomain().norm(T.matrix() * x) / nx;
}

CVector unit_coordinate(const Space& s, int j) {
  CVector e = CVector::Zero(s.dim());
  e[j] = 1.0;
  return e / s.norm(e);
}

// first coordinate above 1e-12 made positive real
CVector phase_normalize(CVector x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > 1e-12) {
      x *= std::conj(phase_of(x[i]));
      break;
    }
  return x;
}

bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

bool single_lp(const Space& s, double p) { return s.kind() == SpaceKind::lp && s.p() == p; }

bool unit_weights(const Space& s) { return (s.weights().array() == 1.0).all(); }

// Higham-style power iteration for smooth lp-type domain and codomain.
CVector power_iterate(const Operator& T, CVector x) {
  const Space& X = T.domain();
  const Space& Y = T.codomain();
  x /= X.norm(x);
  double last = ratio(T, x);
  for (int it = 0; it < 500; ++it) {
    const CVector y = T.matrix() * x;
    if (Y.norm(y) == 0.0) break;
    const CVector g = T.matrix().transpose() * duality_map(Y, y);
    CVector z = duality_map(X.dual(), g);
    const double nz = X.norm(z);
    if (nz == 0.0) break;
    z /= nz;
    const double r = ratio(T, z);
    if (r < last) break;
    x = z;
    if (r - last <= 1e-15 * std::max(1.0, r)) {
      last = r;
      break;
    }
    last = r;
  }
  return x;
}

// (1+1) evolution strategy on the sphere; works for any norm.
CVector hill_climb(const Operator& T, CVector x, Rng& rng, int iters) {
  const Space& X = T.domain();
  x /= X.norm(x);
  double best = ratio(T, x);
  double sigma = 0.3;
  for (int it = 0; it < iters && sigma > 1e-13; ++it) {
    CVector c = x + sigma * rng.gaussian(X.dim()) / std::sqrt(static_cast<double>(X.dim()));
    const double nc = X.norm(c);
    if (nc == 0.0) continue;
    c /= nc;
    const double r = ratio(T, c);
    if (r > best) {
      best = r;
      x = c;
      sigma *= 1.5;
    } else {
      sigma *= 0.9;
    }
  }
  return x;
}

std::vector<CVector> starts(const Operator& T, int restarts, Rng& rng) {
  const Space& X = T.domain();
  std::vector<CVector> out;
  // top Euclidean singular vector is a good first guess in every norm
  Eigen::BDCSVD<CMatrix> svd(T.matrix(), Eigen::ComputeThinV);
  if (svd.singularValues().size() && svd.singularValues()[0] > 0.0) out.push_back(svd.matrixV().col(0));
  for (int j = 0; j < X.dim() && static_cast<int>(out.size()) < restarts / 2; ++j)
    out.push_back(unit_coordinate(X, j));
  while (static_cast<int>(out.size()) < restarts) out.push_back(rng.unit(X));
  return out;
}

std::optional<NormEstimate> closed_form(const Operator& T) {
  const Space& X = T.domain();
  const Space& Y = T.codomain();
  const CMatrix& M = T.matrix();
  NormEstimate e;
  e.exact = true;
  if (M.isZero(0.0)) {
    e.method = "zero";
    return e;
  }
  const auto wx = X.euclidean_weights();
  const auto wy = Y.euclidean_weights();
  if (wx && wy) {
    const RVector gx = wx->cwiseSqrt(), gy = wy->cwiseSqrt();
    const CMatrix S = gy.asDiagonal() * M * gx.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<CMatrix> svd(S, Eigen::ComputeThinV);
    e.value = svd.singularValues()[0];
    CVector w = gx.cwiseInverse().asDiagonal() * svd.matrixV().col(0);
    e.witness = w / X.norm(w);
    e.method = "singular-value";
    return e;
  }
  if (single_lp(X, 1.0)) {
    // maximum of a convex function on the l1 ball sits at a vertex
    for (int j = 0; j < X.dim(); ++j) {
      const double v = Y.norm(M.col(j)) / X.weights()[j];
      if (v > e.value) {
        e.value = v;
        e.witness = unit_coordinate(X, j);
      }
    }
    e.method = "l1-columns";
    return e;
  }
  if (single_lp(Y, kInf) && X.is_lp_family()) {
    for (int i = 0; i < Y.dim(); ++i) {
      const CVector row = M.row(i).transpose();
      const double v = Y.weights()[i] * dual_norm(X, row);
      if (v > e.value) {
        e.value = v;
        CVector w = duality_map(X.dual(), row, true);
        e.witness = w / X.norm(w);
      }
    }
    e.method = "linf-rows";
    return e;
  }
  if (const auto* sh = std::get_if<ShiftTag>(&T.annotation())) {
    const int nb = X.blocks();
    if (std::abs(sh->step) >= nb) {
      e.method = "shift";
      return e;
    }
    const int src = sh->step > 0 ? 0 : -sh->step;
    const int d = X.block_dim();
    CVector w = CVector::Zero(X.dim());
    w.segment(src * d, d) = unit_coordinate(X.base(), 0);
    e.value = 1.0;
    e.witness = w;
    e.method = "shift";
    return e;
  }
  if (const auto* dg = std::get_if<DiagonalTag>(&T.annotation())) {
    if (X.is_lp_family()) {
      Eigen::Index j = 0;
      e.value = dg->values.cwiseAbs().maxCoeff(&j);
      e.witness = unit_coordinate(X, static_cast<int>(j));
      e.method = "diagonal";
      return e;
    }
  }
  if (const auto* mo = std::get_if<MonomialTag>(&T.annotation())) {
    if (X.kind() == SpaceKind::lp && X.same_as(Y) && unit_weights(X)) {
      std::vector<int> seen;
      bool injective = true;
      for (int j = 0; j < X.dim(); ++j) {
        const int t = mo->targets[static_cast<std::size_t>(j)];
        if (t < 0 || t >= X.dim()) continue;
        if (std::find(seen.begin(), seen.end(), t) != seen.end()) injective = false;
        seen.push_back(t);
        if (std::abs(mo->coeffs[j]) > e.value) {
          e.value = std::abs(mo->coeffs[j]);
          e.witness = unit_coordinate(X, j);
        }
      }
      if (injective) {
        e.method = "monomial";
        return e;
      }
      e = NormEstimate{};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<CVector> sphere_maximizers(const Operator& T, int restarts, std::uint64_t seed) {
  const Space& X = T.domain();
  Rng rng(seed);
  std::vector<std::pair<double, CVector>> found;
  if (single_lp(X, 1.0)) {
    for (int j = 0; j < X.dim(); ++j) found.emplace_back(ratio(T, unit_coordinate(X, j)), unit_coordinate(X, j));
  } else {
    const bool smooth = X.is_smooth_lp() && T.codomain().is_smooth_lp();
    for (CVector x : starts(T, restarts, rng)) {
      if (smooth) x = power_iterate(T, x);
      x = hill_climb(T, x, rng, smooth ? 200 : 1500);
      found.emplace_back(ratio(T, x), phase_normalize(x / X.norm(x)));
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return lex_less(a.second, b.second);
  });
  std::vector<CVector> out;
  for (const auto& [v, x] : found) {
    bool dup = false;
    for (const auto& y : out)
      if ((x - y).norm() < 1e-6) dup = true;
    if (!dup) out.push_back(x);
  }
  return out;
}

NormEstimate operator_norm(const Operator& T, int restarts, std::uint64_t seed) {
  if (auto e = closed_form(T)) return *e;
  NormEstimate e;
  e.exact = false;
  e.method = T.domain().is_smooth_lp() && T.codomain().is_smooth_lp() ? "power-iteration" : "hill-climb";
  const auto xs = sphere_maximizers(T, restarts, seed);
  e.witness = xs.front();
  e.value = ratio(T, e.witness);
  return e;
}

double a_T(const Operator& T, const CVector& x, int* clamp_events) {
  const double nx = T.domain().norm(x);
  const double ntx = T.codomain().norm(T.matrix() * x);
  const double r = nx * nx - ntx * ntx;
  if (r < -1e-9 * std::max(nx * nx, 1e-300))
    throw PreconditionError("contraction", "not a contraction: |Tx| > |x| at the given vector");
  if (r < 0.0 && clamp_events) ++*clamp_events;
  return std::sqrt(std::max(0.0, r));
}

double a_hat_T(const Operator& T, double norm_T, const CVector& x) {
  if (norm_T <= 0.0) throw PreconditionError("zero", "Â_T needs T != 0");
  const double nx = T.domain().norm(x);
  const double ntx = T.codomain().norm(T.matrix() * x);
  const double r = norm_T * norm_T * nx * nx - ntx * ntx;
  if (r < -1e-9 * std::max(norm_T * norm_T * nx * nx, 1e-300))
    throw PreconditionError("contraction", "|Tx| exceeds the stated norm of T");
  return std::sqrt(std::max(0.0, r));
}

std::string to_string(ContractionClass c) {
  switch (c) {
    case ContractionClass::strict:
      return "strict";
    case ContractionClass::G1:
      return "G1";
    case ContractionClass::G2:
      return "G2";
    case ContractionClass::not_contraction:
      return "not-contraction";
  }
  return "strict";
}

Classification classify_contraction(const Operator& T, std::uint64_t seed) {
  const NormEstimate est = operator_norm(T, 32, seed);
  Classification out;
  out.cert.check = "contraction-class";
  out.cert.seed = seed;
  out.cert.trials = est.exact ? 1 : 32;
  out.cert.value = est.value;
  if (est.witness.size()) out.cert.witnesses = {est.witness};
  const double n = est.value;
  if (n > 1.0 + 1e-9) {
    out.cls = ContractionClass::not_contraction;
  } else if (T.model_norm && std::abs(*T.model_norm - 1.0) <= 1e-9 && n < 1.0 - 1e-6) {
    out.cls = ContractionClass::G1;
    out.cert.note = "model norm 1 is not attained inside the window";
  } else if (n >= 1.0 - 1e-9) {
    out.cls = ContractionClass::G2;
  } else {
    out.cls = ContractionClass::strict;
    if (!est.exact) out.cert.note = "norm is a search lower bound";
  }
  out.cert.verdict = to_string(out.cls);
  out.cert.residuals = {est.exact ? 0.0 : 1.0};
  return out;
}

AttainmentSet norm_attainment_set(const Operator& T, std::uint64_t seed, const std::optional<Operator>& defect) {
  const Space& X = T.domain();
  const NormEstimate est = operator_norm(T, 32, seed);
  AttainmentSet out{est.value, {}, Subspace::zero(X), true, {}, std::nullopt};
  if (est.value == 0.0) {
    out.guess = Subspace::whole(X);
    return out;
  }
  auto attains = [&](const CVector& x) { return ratio(T, x) >= est.value * (1.0 - 1e-9); };
  std::vector<CVector> cands = sphere_maximizers(T, 32, seed);
  if (est.witness.size()) cands.push_back(phase_normalize(est.witness));
  for (const auto& x : cands) {
    if (!attains(x)) continue;
    bool dup = false;
    for (const auto& y : out.witnesses)
      if ((x - y).norm() < 1e-6) dup = true;
    if (!dup) out.witnesses.push_back(x);
  }
  // witnesses carry sqrt(eps)-size noise; a tight rank cut would keep it as extra directions
  if (!out.witnesses.empty()) {
    CMatrix Wm(X.dim(), static_cast<Eigen::Index>(out.witnesses.size()));
    for (std::size_t i = 0; i < out.witnesses.size(); ++i) Wm.col(static_cast<Eigen::Index>(i)) = out.witnesses[i];
    out.guess = Subspace::from_columns(X, orthonormal_frame(Wm, 1e-5));
  }

  // closure: normalized sums of witness pairs, then random members of the span
  std::vector<CVector> probes;
  for (std::size_t i = 0; i < out.witnesses.size(); ++i)
    for (std::size_t j = i + 1; j < out.witnesses.size(); ++j) {
      probes.push_back(out.witnesses[i] + out.witnesses[j]);
      probes.push_back(out.witnesses[i] - out.witnesses[j]);
    }
  if (out.guess.dim() > 0)
    for (int s = 0; s < 32; ++s) probes.push_back(out.guess.sample_unit(seed * 7919 + static_cast<std::uint64_t>(s)));
  for (const auto& v : probes) {
    const double nv = X.norm(v);
    if (nv < 1e-12) continue;
    if (!attains(v / nv)) {
      out.is_subspace = false;
      out.counterexample = v / nv;
      break;
    }
  }

  if (defect) {
    if (!defect->domain().same_as(X)) throw DimensionError("defect representation acts on a different space");
    out.kernel = Subspace::from_columns(X, kernel_frame(defect->matrix(), 1e-9));
    // maximizers sit at a quadratic peak, so they are located to about sqrt(eps)
    for (const auto& w : out.witnesses)
      if (out.kernel->relative_residual(w) > 1e-6)
        throw InconsistentError("a sampled norm-attaining vector lies outside ker A (residual " +
                                std::to_string(out.kernel->relative_residual(w)) + ")");
  }
  return out;
}

Operator banach_adjoint(const Operator& T) {
  Annotation tag;
  if (const auto* d = std::get_if<DiagonalTag>(&T.annotation())) tag = *d;
  return Operator(T.matrix().transpose(), T.codomain().dual(), T.domain().dual(), tag);
}

Operator left_inverse(const Operator& V) {
  if (!V.square()) throw PreconditionError("annotation", "left inverse needs an operator on one space");
  const Space& X = V.domain();
  std::optional<Operator> A;
  std::vector<CVector> safe;
  if (const auto* sh = std::get_if<ShiftTag>(&V.annotation())) {
    if (sh->step != 1) throw PreconditionError("annotation", "left inverse is built for the forward shift");
    A = Operator(tag_matrix(ShiftTag{-1}, X, X), X, ShiftTag{-1});
    Rng rng(17);
    for (int s = 0; s < 8; ++s) {
      CVector x = rng.gaussian(X.dim());
      x.tail(X.block_dim()).setZero();
      safe.push_back(x);
    }
  } else if (const auto* mo = std::get_if<MonomialTag>(&V.annotation())) {
    const int n = X.dim();
    std::vector<int> targets(static_cast<std::size_t>(n), -1);
    CVector coeffs = CVector::Zero(n);
    for (int j = 0; j < n; ++j) {
      const int t = mo->targets[static_cast<std::size_t>(j)];
      if (t < 0 || t >= n) continue;
      if (std::abs(std::abs(mo->coeffs[j]) - 1.0) > 1e-12)
        throw PreconditionError("annotation", "monomial is not isometric on coordinate " + std::to_string(j));
      if (targets[static_cast<std::size_t>(t)] != -1)
        throw PreconditionError("annotation", "monomial is not injective");
      targets[static_cast<std::size_t>(t)] = j;
      coeffs[t] = 1.0 / mo->coeffs[j];
      CVector e = CVector::Zero(n);
      e[j] = 1.0;
      safe.push_back(e);
    }
    A = monomial(X, targets, coeffs);
  } else {
    throw PreconditionError("annotation", "left inverse needs a shift or isometric monomial annotation");
  }
  for (const auto& x : safe)
    if ((A->matrix() * (V.matrix() * x) - x).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, x.cwiseAbs().maxCoeff()))
      throw InconsistentError("left inverse fails TV = I on a boundary-safe vector");
  const NormEstimate ne = operator_norm(*A);
  if (std::abs(ne.value - 1.0) > 1e-8) throw InconsistentError("left inverse does not have norm one");
  return *A;
}

}  // namespace bjlab
