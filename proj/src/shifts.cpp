#include "bjlab/shifts.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "bjlab/operators.hpp"
#include "bjlab/orthogonality.hpp"
#include "bjlab/random.hpp"

namespace bjlab {

Operator make_unilateral_shift(const Space& X, int blocks) {
  if (blocks < 2) throw PreconditionError("blocks", "a shift needs at least two blocks");
  const Space K = Space::block_seq(X, blocks);
  return Operator(tag_matrix(ShiftTag{1}, K, K), K, ShiftTag{1});
}

Operator make_backward_shift(const Space& X, int blocks) {
  if (blocks < 2) throw PreconditionError("blocks", "a shift needs at least two blocks");
  const Space K = Space::block_seq(X, blocks);
  return Operator(tag_matrix(ShiftTag{-1}, K, K), K, ShiftTag{-1});
}

Operator make_bilateral_shift(const Space& X, int halfwidth) {
  const Space Y = Space::bi_block_seq(X, halfwidth);
  return Operator(tag_matrix(ShiftTag{1}, Y, Y), Y, ShiftTag{1});
}

SigmaShiftBundle make_sigma_shift(const Space& X, int halfwidth) {
  if (halfwidth < 2) throw PreconditionError("halfwidth", "halfwidth must be at least 2");
  const Space Y = Space::bi_block_seq(X, halfwidth);
  CMatrix block0 = CMatrix::Zero(Y.dim(), X.dim());
  block0.middleRows(Y.block_offset(0), X.dim()).setIdentity();
  auto nrm = [Y](const CVector& v) { return Y.norm(v); };
  return SigmaShiftBundle{Y, nrm, nrm, make_bilateral_shift(X, halfwidth), Subspace::from_columns(Y, block0),
                          halfwidth};
}

Certificate verify_sigma_shift(const SigmaShiftBundle& b, int horizon, std::uint64_t seed) {
  if (horizon > b.halfwidth - 1) throw PreconditionError("horizon", "horizon must be at most halfwidth - 1");
  Certificate c;
  c.check = "sigma-shift";
  c.seed = seed;
  const Space& Y = b.Y;
  const CMatrix& U = b.U.matrix();
  Rng rng(seed);
  const int d = Y.block_dim();

  // isometry sigma -> Y on vectors with empty last block
  double iso = 0.0, inv = 0.0, split = 0.0;
  const CMatrix Uinv = U.transpose();  // block shift back
  for (int s = 0; s < 50; ++s) {
    CVector x = rng.gaussian(Y.dim());
    x.segment(Y.block_offset(b.halfwidth), d).setZero();
    iso = std::max(iso, std::abs(b.norm_y(U * x) - b.norm_sigma(x)) / b.norm_sigma(x));
    inv = std::max(inv, (Uinv * (U * x) - x).cwiseAbs().maxCoeff());
    CVector w1 = x, w2 = x;
    w1.tail(Y.dim() - Y.block_offset(0)).setZero();
    w2.head(Y.block_offset(0)).setZero();
    const double lhs = std::pow(b.norm_y(w1 + w2), 2);
    const double rhs = std::pow(b.norm_y(w1), 2) + std::pow(b.norm_y(w2), 2);
    split = std::max(split, std::abs(lhs - rhs) / std::max(1.0, rhs));
  }
  // U^n I ⊥_B I and I ⊥_B U^{-n} I
  double worst_orth = 0.0;
  CMatrix Un = CMatrix::Identity(Y.dim(), Y.dim());
  for (int n = 1; n <= horizon; ++n) {
    Un = U * Un;
    const Subspace fwd = Subspace::from_columns(Y, Un * b.generating.frame());
    const Subspace back = Subspace::from_columns(Y, Un.transpose() * b.generating.frame());
    const Certificate a = bj_subspace(fwd, b.generating, 8, seed + static_cast<std::uint64_t>(n));
    const Certificate z = bj_subspace(b.generating, back, 8, seed + 100 + static_cast<std::uint64_t>(n));
    c.trials += a.trials + z.trials;
    worst_orth = std::max({worst_orth, a.value, z.value});
    if (a.verdict != "orthogonal" && c.witnesses.empty()) c.witnesses = a.witnesses;
    if (z.verdict != "orthogonal" && c.witnesses.empty()) c.witnesses = z.witnesses;
  }
  c.residuals = {iso, inv, split, worst_orth};
  c.value = std::max({iso, inv, split, worst_orth});
  c.verdict = (iso <= 1e-10 && inv == 0.0 && split <= 1e-10 && worst_orth <= 1e-9) ? "pass" : "fail";
  return c;
}

namespace {

bool is_forward_shift(const Operator& V) {
  if (const auto* sh = std::get_if<ShiftTag>(&V.annotation())) return sh->step == 1;
  if (const auto* mo = std::get_if<MonomialTag>(&V.annotation())) {
    for (std::size_t j = 0; j < mo->targets.size(); ++j)
      if (mo->targets[j] != static_cast<int>(j) + 1 || mo->coeffs[static_cast<Eigen::Index>(j)] != 1.0) return false;
    return true;
  }
  return false;
}

}  // namespace

SigmaExtension sigma_extension(const Operator& V, const CMatrix& L, int horizon, std::uint64_t seed) {
  if (!V.square() || !is_forward_shift(V))
    throw PreconditionError("shift", "sigma extension needs a forward-shift annotated operator");
  const Space& K = V.domain();
  if (L.rows() != K.dim() || L.cols() == 0) throw DimensionError("generating subspace does not live in the shift's space");
  if (horizon < 1) throw PreconditionError("horizon", "horizon must be positive");
  const int r = static_cast<int>(L.cols());
  Rng rng(seed);

  // V^n L for n = 0..horizon must stay in the window
  std::vector<CMatrix> VnL{L};
  for (int n = 1; n <= horizon; ++n) VnL.push_back(V.matrix() * VnL.back());
  for (int s = 0; s < 8; ++s) {
    const CVector a = rng.gaussian(r);
    const double base = K.norm(L * a);
    if (std::abs(K.norm(VnL.back() * a) - base) > 1e-12 * base)
      throw PreconditionError("horizon", "V^horizon L leaves the truncation window");
  }

  const Space carrier = Space::bi_block_seq(Space::lp(r, 2.0), horizon);
  const int H = horizon;
  auto norm_y = [VnL, K, r, H](const CVector& l) {
    CVector neg = CVector::Zero(K.dim()), pos = CVector::Zero(K.dim());
    for (int n = -H; n <= H; ++n) {
      const auto seg = l.segment((n + H) * r, r);
      if (n < 0)
        neg += VnL[static_cast<std::size_t>(-n)] * seg;
      else
        pos += VnL[static_cast<std::size_t>(n)] * seg;
    }
    return std::hypot(K.norm(neg), K.norm(pos));
  };
  // |l|_sigma = |(l_{n-1})|_Y, by index shift
  auto norm_sigma = [norm_y, r, H](const CVector& l) {
    CVector s = CVector::Zero(l.size());
    s.segment(r, 2 * H * r) = l.segment(0, 2 * H * r);
    return norm_y(s);
  };
  const Operator U(tag_matrix(ShiftTag{1}, carrier, carrier), carrier, ShiftTag{1});
  CMatrix block0 = CMatrix::Zero(carrier.dim(), r);
  block0.middleRows(H * r, r).setIdentity();
  SigmaExtension out{SigmaShiftBundle{carrier, norm_y, norm_sigma, U, Subspace::from_columns(carrier, block0), H},
                     Certificate{}};
  Certificate& c = out.check;
  c.check = "sigma-extension";
  c.seed = seed;

  double iso = 0.0, ext = 0.0, emb = 0.0, ratio = 0.0, hilbert = 0.0;
  const bool euclid = K.euclidean_weights().has_value() && (L.adjoint() * L - CMatrix::Identity(r, r)).norm() < 1e-12;
  for (int s = 0; s < 100; ++s) {
    // boundary-safe bi-sequence
    CVector l = rng.gaussian(carrier.dim());
    l.tail(r).setZero();
    iso = std::max(iso, std::abs(norm_y(U.matrix() * l) - norm_sigma(l)) / norm_sigma(l));
    if (euclid) hilbert = std::max(hilbert, std::abs(norm_y(l) - l.norm()) / l.norm());

    // extension: x = sum_{n>=0} V^n L a_n with a_{H-1} = a_H = 0 stays inside the window under V
    CVector a = CVector::Zero(carrier.dim());
    a.segment(H * r, (H - 1) * r) = rng.gaussian((H - 1) * r);
    CVector x = CVector::Zero(K.dim());
    for (int n = 0; n < H; ++n) x += VnL[static_cast<std::size_t>(n)] * a.segment((n + H) * r, r);
    emb = std::max(emb, std::abs(norm_y(a) - K.norm(x)) / K.norm(x));
    const CVector Va = U.matrix() * a;
    CVector Vx_seq = CVector::Zero(carrier.dim());
    Vx_seq.segment((H + 1) * r, (H - 1) * r) = a.segment(H * r, (H - 1) * r);
    ext = std::max(ext, (Va - Vx_seq).cwiseAbs().maxCoeff());
    ext = std::max(ext, std::abs(norm_y(Va) - K.norm(V.matrix() * x)) / K.norm(x));

    // sqrt(2) bound on negative support
    CVector p = CVector::Zero(carrier.dim());
    p.head(H * r) = rng.gaussian(H * r);
    ratio = std::max(ratio, norm_y(p) / norm_sigma(p));
  }
  // push the ratio with a short local search from the worst sample
  {
    CVector p = CVector::Zero(carrier.dim());
    p.segment((H - 1) * r, r) = rng.gaussian(r);
    p.segment((H - 2 >= 0 ? H - 2 : 0) * r, r) += rng.gaussian(r);
    double cur = norm_y(p) / norm_sigma(p);
    double sigma = 0.3;
    for (int it = 0; it < 400 && sigma > 1e-8; ++it) {
      CVector q = p;
      q.head(H * r) += sigma * rng.gaussian(H * r);
      const double v = norm_y(q) / norm_sigma(q);
      if (v > cur) {
        cur = v;
        p = q;
        sigma *= 1.3;
      } else {
        sigma *= 0.9;
      }
    }
    ratio = std::max(ratio, cur);
  }
  c.trials = 100;
  c.residuals = {iso, ext, emb, ratio, hilbert};
  c.value = std::max({iso, ext, emb});
  const bool ok = iso <= 1e-10 && ext <= 1e-10 && emb <= 1e-10 && ratio <= std::sqrt(2.0) + 1e-9 && hilbert <= 1e-10;
  c.verdict = ok ? "pass" : "fail";
  c.note = "residuals: isometry, extension, embedding, max |p|_Y/|p|_sigma, hilbert collapse";
  return out;
}

PhiResult phi_alpha(const Operator& T, cplx alpha) {
  if (!T.square()) throw PreconditionError("operator", "phi_alpha needs a square operator");
  if (std::abs(alpha) >= 1.0) throw PreconditionError("alpha", "|alpha| must be below 1");
  const Eigen::Index n = T.matrix().rows();
  const CMatrix I = CMatrix::Identity(n, n);
  Eigen::PartialPivLU<CMatrix> lu(I - std::conj(alpha) * T.matrix());
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) throw PreconditionError("singular", "I - conj(alpha) T is singular");
  const CMatrix M = (T.matrix() - alpha * I) * lu.inverse();
  return PhiResult{Operator(M, T.domain()), rc, 1.0 / rc > 1e8};
}

MobiusSearch mobius_norm_search(const Operator& T, int radii, std::uint64_t seed) {
  MobiusSearch best;
  auto eval = [&](cplx a, int restarts) {
    const NormEstimate e = operator_norm(phi_alpha(T, a).op, restarts, seed);
    if (e.value > best.norm) best = {a, e.value, e.exact};
  };
  for (int k = 0; k < radii; ++k)
    for (int j = 0; j < 16; ++j) eval(std::polar(static_cast<double>(k) / radii, 2.0 * std::numbers::pi * j / 16.0), 4);
  double h = 0.5 / radii;
  while (h > 1e-4) {
    const MobiusSearch before = best;
    for (int j = 0; j < 8; ++j) {
      const cplx a = before.alpha + std::polar(h, std::numbers::pi * j / 4.0);
      if (std::abs(a) < 1.0 - 1e-6) eval(a, 4);
    }
    if (best.norm <= before.norm) h *= 0.5;
  }
  const cplx a = best.alpha;
  best.norm = 0.0;
  eval(a, 32);
  return best;
}

TwoBlockProbe bilateral_phi_probe(const Space& X, int halfwidth, cplx alpha, const CVector& x, const CVector& y) {
  if (halfwidth < 2) throw PreconditionError("halfwidth", "the two-block witness needs halfwidth >= 2");
  const Operator U = make_bilateral_shift(X, halfwidth);
  const Space& Y = U.domain();
  CVector xb = CVector::Zero(Y.dim());
  xb.segment(Y.block_offset(0), X.dim()) = x;
  xb.segment(Y.block_offset(1), X.dim()) = y;
  const CVector yb = xb - std::conj(alpha) * (U.matrix() * xb);
  const PhiResult phi = phi_alpha(U, alpha);
  return TwoBlockProbe{Y.norm(phi.op.matrix() * yb), Y.norm(yb), X.norm(x - alpha * y), X.norm(y - std::conj(alpha) * x)};
}

Certificate bilateral_phi_search(const Space& X, int halfwidth, int trials, std::uint64_t seed) {
  Certificate c;
  c.check = "bilateral-phi";
  c.seed = seed;
  Rng rng(seed);
  auto gap = [&](const CVector& x, const CVector& y, cplx a) { return X.norm(x - a * y) - X.norm(y - std::conj(a) * x); };
  double best = -kInf;
  CVector bx, by;
  cplx ba;
  for (int t = 0; t < trials; ++t) {
    CVector x = rng.unit(X), y = rng.unit(X);
    cplx a = std::polar(rng.uniform(0.1, 0.9), rng.uniform(0.0, 2.0 * std::numbers::pi));
    double cur = gap(x, y, a);
    double sigma = 0.3;
    for (int it = 0; it < 300 && sigma > 1e-9; ++it) {
      CVector xn = x + sigma * rng.gaussian(X.dim());
      CVector yn = y + sigma * rng.gaussian(X.dim());
      xn /= X.norm(xn);
      yn /= X.norm(yn);
      cplx an = a + sigma * rng.complex_normal();
      if (std::abs(an) > 0.95) an *= 0.95 / std::abs(an);
      const double v = gap(xn, yn, an);
      if (v > cur) {
        cur = v;
        x = xn;
        y = yn;
        a = an;
        sigma *= 1.4;
      } else {
        sigma *= 0.9;
      }
    }
    ++c.trials;
    if (cur > best) {
      best = cur;
      bx = x;
      by = y;
      ba = a;
    }
  }
  const TwoBlockProbe p = bilateral_phi_probe(X, halfwidth, ba, bx, by);
  c.value = p.phi_norm - p.input_norm;
  c.residuals = {p.phi_norm, p.input_norm, p.forward, p.backward, ba.real(), ba.imag()};
  c.witnesses = {bx, by, CVector::Constant(1, ba)};
  c.verdict = c.value > 1e-4 ? "expansive" : "contractive";
  return c;
}

SpectrumPoint spectrum_probe(const SigmaShiftBundle& b, cplx lambda, int horizon, std::uint64_t seed) {
  if (horizon > b.halfwidth - 1 || horizon < 1)
    throw PreconditionError("horizon", "horizon must lie in 1..halfwidth-1");
  const Space& Y = b.Y;
  const int d = Y.block_dim();
  const CMatrix& U = b.U.matrix();
  const int lo = Y.block_offset(-horizon);
  const int len = 2 * horizon * d;
  auto residual = [&](const CVector& x) {
    const double nx = b.norm_sigma(x);
    return b.norm_y(U * x - lambda * x) / nx;
  };
  const cplx ph = std::conj(phase_of(lambda));
  Rng rng(seed);
  const Space& X = Y.base();
  std::vector<CVector> bases;
  CVector e0 = CVector::Zero(d);
  e0[0] = 1.0;
  bases.push_back(e0);
  bases.push_back(rng.unit(X));
  double best = kInf;
  CVector bx;
  for (const auto& e : bases)
    for (int taper = 0; taper < 2; ++taper) {
      CVector x = CVector::Zero(Y.dim());
      for (int n = -horizon; n < horizon; ++n) {
        const double w = taper == 0 ? 1.0
                                    : std::sin(std::numbers::pi * (n + horizon + 1) / (2.0 * horizon + 1.0));
        x.segment(Y.block_offset(n), d) = w * std::pow(ph, n) * e;
      }
      const double r = residual(x);
      if (r < best) {
        best = r;
        bx = x;
      }
    }
  if (const auto w = Y.euclidean_weights()) {
    // exact smallest singular value on the boundary-safe columns
    const RVector g = w->cwiseSqrt();
    CMatrix M = U.middleCols(lo, len);
    M.middleRows(lo, len) -= lambda * CMatrix::Identity(len, len);
    const CMatrix S = g.asDiagonal() * M * g.segment(lo, len).cwiseInverse().asDiagonal();
    Eigen::BDCSVD<CMatrix> svd(S);
    best = std::min(best, svd.singularValues()[svd.singularValues().size() - 1]);
  } else {
    double sigma = 0.05;
    for (int it = 0; it < 600 && sigma > 1e-9; ++it) {
      CVector x = bx;
      x.segment(lo, len) += sigma * rng.gaussian(len) / std::sqrt(static_cast<double>(len));
      const double r = residual(x);
      if (r < best) {
        best = r;
        bx = x;
        sigma *= 1.3;
      } else {
        sigma *= 0.95;
      }
    }
  }
  return SpectrumPoint{lambda, best, horizon};
}

std::string spectrum_csv(const std::vector<SpectrumPoint>& points) {
  std::ostringstream os;
  os << "lambda_re,lambda_im,residual,horizon\n";
  os << std::setprecision(12);
  for (const auto& p : points)
    os << p.lambda.real() << "," << p.lambda.imag() << "," << p.residual << "," << p.horizon << "\n";
  return os.str();
}

}  // namespace bjlab
