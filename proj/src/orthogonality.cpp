#include "bjlab/orthogonality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "bjlab/functionals.hpp"
#include "bjlab/operators.hpp"
#include "bjlab/random.hpp"

namespace bjlab {

namespace {

constexpr double kGolden = 0.6180339887498949;

double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters, double* arg) {
  double a = hi - kGolden * (hi - lo), b = lo + kGolden * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int i = 0; i < iters; ++i) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = f(b);
    }
  }
  *arg = fa <= fb ? a : b;
  return std::min(fa, fb);
}

// |x + lambda y| with a fast path for PolySup (grid values precomputed).
std::function<double(cplx)> line_norm(const Space& space, const CVector& x, const CVector& y) {
  if (space.kind() == SpaceKind::poly_sup) {
    const int G = space.gridsize();
    CVector fx(G), fy(G);
    for (int g = 0; g < G; ++g) {
      const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * g / G);
      cplx sx = 0.0, sy = 0.0;
      for (int k = space.degree(); k >= 0; --k) {
        sx = sx * z + x[k];
        sy = sy * z + y[k];
      }
      fx[g] = sx;
      fy[g] = sy;
    }
    return [fx, fy](cplx l) { return std::sqrt((fx + l * fy).cwiseAbs2().maxCoeff()); };
  }
  return [&space, x, y](cplx l) { return space.norm(x + l * y); };
}

}  // namespace

BjMin bj_min(const Space& space, const CVector& x, const CVector& y) {
  space.check(x);
  space.check(y);
  const double ny = space.norm(y);
  if (ny == 0.0) throw PreconditionError("zero", "bj_min needs y != 0");
  const double nx = space.norm(x);
  BjMin best{0.0, nx};
  if (nx == 0.0) return best;
  const auto f = line_norm(space, x, y);

  // polar grid: 16 angles x 24 radii up to 4|x|/|y|
  const double R = 4.0 * nx / ny;
  for (int a = 0; a < 16; ++a)
    for (int r = 1; r <= 24; ++r) {
      const cplx l = std::polar(R * r / 24.0, 2.0 * std::numbers::pi * a / 16.0);
      const double v = f(l);
      if (v < best.value) best = {l, v};
    }

  // |x + l y| <= |x| forces |l| <= 2|x|/|y|; nested golden section on that square
  const double B = 2.0 * nx / ny;
  double im_at = 0.0;
  auto inner = [&](double re) {
    double arg = 0.0;
    const double v = golden_min([&](double im) { return f(cplx(re, im)); }, -B, B, 72, &arg);
    im_at = arg;
    return v;
  };
  double re = 0.0;
  golden_min(inner, -B, B, 72, &re);
  inner(re);
  const cplx lg(re, im_at);
  const double vg = f(lg);
  if (vg < best.value) best = {lg, vg};

  // local polish around the incumbent, shrinking box
  double h = B / 64.0;
  while (h > 1e-13 * std::max(1.0, B)) {
    bool improved = false;
    for (int k = 0; k < 8; ++k) {
      const cplx l = best.lambda + std::polar(h, std::numbers::pi * k / 4.0);
      const double v = f(l);
      if (v < best.value) {
        best = {l, v};
        improved = true;
      }
    }
    if (!improved) h *= 0.5;
  }
  return best;
}

Certificate bj_orthogonal(const Space& space, const CVector& x, const CVector& y, double tol) {
  const double nx = space.norm(x);
  const double ny = space.norm(y);
  if (nx == 0.0 || ny == 0.0) throw PreconditionError("zero", "bj_orthogonal needs nonzero x and y");
  const BjMin m = bj_min(space, x, y);
  const double drop = nx - m.value;
  const bool orth = drop <= tol * std::max(1.0, nx);
  Certificate c;
  c.check = "bj-orthogonal";
  c.verdict = orth ? "orthogonal" : "not-orthogonal";
  c.value = drop;
  c.residuals = {m.value, nx};
  c.trials = 1;
  if (!orth) c.witnesses = {x, y, CVector::Constant(1, m.lambda)};
  if (space.is_smooth_lp()) {
    const CVector f = duality_map(space, x);
    const double james = std::abs((f.transpose() * y)(0, 0)) / (nx * ny);
    c.residuals.push_back(james);
    // the drop is second order in f_x(y): only gross disagreement is an optimizer failure
    const bool james_orth = james <= tol;
    const bool james_far = james > 1e-2;
    if ((james_orth && drop > 1e3 * tol * std::max(1.0, nx)) || (james_far && orth))
      throw InconsistentError("minimization and James criterion disagree: drop " + std::to_string(drop) +
                              ", |f_x(y)| " + std::to_string(james));
  }
  return c;
}

Certificate bj_subspace(const Subspace& Y, const Subspace& Z, int samples, std::uint64_t seed) {
  const Space& X = Y.ambient();
  if (Y.dim() == 0 || Z.dim() == 0) throw PreconditionError("zero", "bj_subspace needs nontrivial subspaces");
  Certificate c;
  c.check = "bj-subspace";
  c.seed = seed;
  Rng rng(seed);
  double worst = -kInf;
  CVector wy, wz;
  auto gap = [&](const CVector& y, const CVector& z) {
    const double ny = X.norm(y);
    return (ny - bj_min(X, y, z).value) / ny;
  };
  auto consider = [&](const CVector& y, const CVector& z) {
    const double g = gap(y, z);
    ++c.trials;
    if (g > worst) {
      worst = g;
      wy = y;
      wz = z;
    }
  };
  // basis pairs first, then random unit pairs
  for (const auto& y : Y.basis())
    for (const auto& z : Z.basis())
      if (X.norm(y) > 0 && X.norm(z) > 0) consider(y, z);
  for (int s = 0; s < samples; ++s) consider(Y.sample_unit(rng.next_seed()), Z.sample_unit(rng.next_seed()));
  // local search on the worst pair: perturb inside the subspaces
  double sigma = 0.2;
  for (int it = 0; it < 60 && sigma > 1e-6; ++it) {
    const CVector y = wy + sigma * Y.frame() * rng.gaussian(Y.dim());
    const CVector z = wz + sigma * Z.frame() * rng.gaussian(Z.dim());
    if (X.norm(y) == 0.0 || X.norm(z) == 0.0) continue;
    const double before = worst;
    consider(y / X.norm(y), z / X.norm(z));
    sigma *= worst > before ? 1.3 : 0.8;
  }
  const bool orth = worst <= 1e-9;
  c.verdict = orth ? "orthogonal" : "not-orthogonal";
  c.value = std::max(0.0, worst);
  c.witnesses = {wy, wz};
  c.residuals = {worst};
  return c;
}

Certificate norm_one_projection_check(const Operator& P, std::uint64_t seed) {
  if (!P.square()) throw PreconditionError("operator", "projection must act on one space");
  const Space& X = P.domain();
  const CMatrix& M = P.matrix();
  Certificate c;
  c.check = "norm-one-projection";
  c.seed = seed;
  const double idem = (M * M - M).cwiseAbs().maxCoeff();
  const NormEstimate ne = operator_norm(P, 32, seed);
  c.residuals = {idem, ne.value};
  c.value = ne.value;
  if (idem >= 1e-10) {
    c.verdict = "not-idempotent";
    return c;
  }
  if (std::abs(ne.value - 1.0) > 1e-6) {
    c.verdict = "norm-not-one";
    if (ne.witness.size()) c.witnesses = {ne.witness};
    return c;
  }
  const Subspace range = Subspace::from_columns(X, orthonormal_frame(M));
  const Subspace kernel = Subspace::from_columns(X, kernel_frame(M, 1e-10));
  c.witnesses.assign(range.frame().colwise().begin(), range.frame().colwise().end());
  for (Eigen::Index j = 0; j < kernel.frame().cols(); ++j) c.witnesses.push_back(kernel.frame().col(j));
  if (kernel.dim() == 0 || range.dim() == 0) {
    c.verdict = "pass";
    return c;
  }
  const Certificate o = bj_subspace(range, kernel, 64, seed);
  c.residuals.push_back(o.value);
  c.trials = o.trials;
  c.verdict = o.verdict == "orthogonal" ? "pass" : "range-not-orthogonal";
  return c;
}

Certificate convex_hull_bj_poly(const Space& poly, const CVector& f, const CVector& g) {
  if (poly.kind() != SpaceKind::poly_sup) throw PreconditionError("space", "convex hull criterion needs PolySup");
  poly.check(f);
  poly.check(g);
  const double nf = poly.norm(f);
  if (nf == 0.0) throw PreconditionError("zero", "f must be nonzero");
  Certificate c;
  c.check = "bj-poly-hull";
  c.trials = 1;
  if (poly.norm(g) == 0.0) {
    c.verdict = "orthogonal";
    c.note = "g = 0";
    return c;
  }
  const int G = poly.gridsize();
  const double eps = 10.0 / G;
  std::vector<double> angles;
  bool has_zero = false;
  for (int k = 0; k < G; ++k) {
    const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * k / G);
    cplx fz = 0.0, gz = 0.0;
    for (int i = poly.degree(); i >= 0; --i) {
      fz = fz * z + f[i];
      gz = gz * z + g[i];
    }
    if (std::abs(fz) < nf * (1.0 - eps)) continue;
    const cplx s = fz * std::conj(gz);
    if (std::abs(s) <= 1e-14 * nf) {
      has_zero = true;
      continue;
    }
    angles.push_back(std::arg(s));
  }
  if (angles.empty() && !has_zero)
    throw PreconditionError("grid", "no near-maximizers of |f| on the grid; refine the grid");
  bool inside = has_zero;
  double max_gap = 0.0;
  if (!inside) {
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 1; i < angles.size(); ++i) max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    max_gap = std::max(max_gap, angles.front() + 2.0 * std::numbers::pi - angles.back());
    // all points in an open half plane iff some angular gap exceeds pi
    inside = max_gap <= std::numbers::pi + 1e-12;
  }
  const BjMin m = bj_min(poly, f, g);
  const double drop = nf - m.value;
  c.verdict = inside ? "orthogonal" : "not-orthogonal";
  c.value = drop;
  c.residuals = {m.value, nf, max_gap, static_cast<double>(angles.size())};
  if (!inside) c.witnesses = {f, g, CVector::Constant(1, m.lambda)};
  if ((inside && drop > 1e-6 * nf) || (!inside && drop < 1e-12 * nf && max_gap > std::numbers::pi + 1e-3))
    throw InconsistentError("convex hull criterion and bj_min disagree (drop " + std::to_string(drop) + ")");
  return c;
}

}  // namespace bjlab
