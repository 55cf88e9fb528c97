#include "bjlab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "bjlab/random.hpp"

namespace bjlab {

namespace {

// Support functional with J(0) = 0 on every part.
CVector duality(const Space& s, const CVector& x, bool canonical) {
  const int n = s.dim();
  CVector f = CVector::Zero(n);
  switch (s.kind()) {
    case SpaceKind::lp: {
      const double nx = s.norm(x);
      if (nx == 0.0) return f;
      const double p = s.p();
      const RVector& w = s.weights();
      if (p == 2.0) {
        for (int i = 0; i < n; ++i) f[i] = w[i] * std::conj(x[i]);
      } else if (p == 1.0) {
        for (int i = 0; i < n; ++i) {
          if (x[i] == 0.0 && !canonical)
            throw PreconditionError("smoothness", "support functional not unique: x has a zero coordinate in " +
                                                      s.describe());
          if (x[i] != 0.0) f[i] = nx * w[i] * std::conj(phase_of(x[i]));
        }
      } else if (std::isinf(p)) {
        int best = 0;
        double bv = -1.0;
        for (int i = 0; i < n; ++i) {
          const double v = w[i] * std::abs(x[i]);
          if (v > bv) {
            bv = v;
            best = i;
          }
        }
        if (!canonical) {
          for (int i = 0; i < n; ++i)
            if (i != best && w[i] * std::abs(x[i]) >= bv * (1.0 - 1e-12))
              throw PreconditionError("smoothness", "support functional not unique: maximal coordinate is not unique in " +
                                                        s.describe());
        }
        f[best] = nx * w[best] * std::conj(phase_of(x[best]));
      } else {
        for (int i = 0; i < n; ++i) {
          const double a = std::abs(x[i]);
          if (a == 0.0) continue;
          f[i] = nx * w[i] * std::pow(a / nx, p - 1.0) * std::conj(x[i] / a);
        }
      }
      return f;
    }
    case SpaceKind::direct_sum2: {
      int off = 0;
      for (const auto& part : s.parts()) {
        f.segment(off, part.dim()) = duality(part, x.segment(off, part.dim()), canonical);
        off += part.dim();
      }
      return f;
    }
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq: {
      const int d = s.block_dim();
      for (int k = 0; k < s.blocks(); ++k) {
        const auto seg = x.segment(k * d, d);
        if (seg.isZero(0.0)) continue;
        f.segment(k * d, d) = duality(s.base(), seg, canonical);
      }
      return f;
    }
    default:
      throw PreconditionError("smoothness", "no closed-form duality map on " + s.describe());
  }
}

}  // namespace

CVector duality_map(const Space& space, const CVector& x, bool canonical) {
  space.check(x);
  return duality(space, x, canonical);
}

cplx Functional::operator()(const CVector& x) const {
  predual.check(x);
  return (coeffs.transpose() * x)(0, 0);
}

double Functional::dual_norm() const { return bjlab::dual_norm(predual, coeffs); }

double dual_norm(const Space& space, const CVector& f) {
  space.check(f);
  return space.dual().norm(f);
}

CVector support_functional(const Space& space, const CVector& x, bool canonical) {
  space.check(x);
  if (space.norm(x) == 0.0) throw PreconditionError("zero", "support functional of the zero vector");
  return duality(space, x, canonical);
}

Functional support(const Space& space, const CVector& x, bool canonical) {
  return Functional{support_functional(space, x, canonical), space};
}

CVector inverse_duality(const Space& space, const CVector& f) {
  space.check(f);
  return duality(space.dual(), f, false);
}

CVector functional_attainment(const Space& space, const CVector& f) {
  const double nf = dual_norm(space, f);
  if (nf == 0.0) throw PreconditionError("zero", "the zero functional attains its norm everywhere");
  const CVector x = inverse_duality(space, f);
  return x / space.norm(x);
}

namespace {

// Dual problem of the minimal extension: minimize 0.5|B a|^2 - Re(c^T a).
struct ExtensionProblem {
  const Space& space;
  CMatrix B;
  CVector c;

  double value(const CVector& a) const {
    const double ny = space.norm(B * a);
    return 0.5 * ny * ny - (c.transpose() * a)(0, 0).real();
  }
  CVector residual(const CVector& a) const {
    const CVector f = duality(space, B * a, false);
    return B.transpose() * f - c;
  }
  // real gradient (Re r, -Im r)
  Eigen::VectorXd gradient(const CVector& a) const {
    const CVector r = residual(a);
    const Eigen::Index k = a.size();
    Eigen::VectorXd g(2 * k);
    for (Eigen::Index j = 0; j < k; ++j) {
      g[j] = r[j].real();
      g[k + j] = -r[j].imag();
    }
    return g;
  }
};

CVector from_real(const Eigen::VectorXd& u) {
  const Eigen::Index k = u.size() / 2;
  CVector a(k);
  for (Eigen::Index j = 0; j < k; ++j) a[j] = {u[j], u[k + j]};
  return a;
}

Eigen::VectorXd to_real(const CVector& a) {
  const Eigen::Index k = a.size();
  Eigen::VectorXd u(2 * k);
  for (Eigen::Index j = 0; j < k; ++j) {
    u[j] = a[j].real();
    u[k + j] = a[j].imag();
  }
  return u;
}

Eigen::VectorXd newton_solve(const ExtensionProblem& prob, Eigen::VectorXd u) {
  const Eigen::Index m = u.size();
  const double cscale = std::max(1e-300, prob.c.norm());
  for (int iter = 0; iter < 300; ++iter) {
    const Eigen::VectorXd g = prob.gradient(from_real(u));
    if (g.norm() <= 1e-14 * cscale) break;
    const double h = 1e-6 * (1.0 + u.norm());
    Eigen::MatrixXd H(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd up = u, um = u;
      up[i] += h;
      um[i] -= h;
      H.col(i) = (prob.gradient(from_real(up)) - prob.gradient(from_real(um))) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose());
    Eigen::VectorXd d;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) d = -ldlt.solve(g);
    if (d.size() == 0 || !d.allFinite() || d.dot(g) >= 0.0) d = -g;
    const double f0 = prob.value(from_real(u));
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Eigen::VectorXd un = u + t * d;
      // near the optimum the value stalls at rounding level, so a shrinking gradient also counts
      if (prob.value(from_real(un)) <= f0 + 1e-4 * t * d.dot(g) ||
          prob.gradient(from_real(un)).norm() <= (1.0 - 1e-4 * t) * g.norm()) {
        u = un;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // fall back to a plain gradient step at the Armijo scale
      t = 1.0;
      for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
        const Eigen::VectorXd un = u - t * g;
        if (prob.value(from_real(un)) < f0) {
          u = un;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }
  return u;
}

}  // namespace

CVector hahn_banach_extend(const Subspace& Y, const CVector& values, std::uint64_t seed) {
  const Space& X = Y.ambient();
  if (!X.is_smooth_lp())
    throw PreconditionError("smoothness", "minimal extension is unique only for smooth lp-type spaces; got " +
                                              X.describe());
  if (!Y.independent()) throw PreconditionError("rank", "rank-deficient basis for the subspace");
  const Eigen::Index k = static_cast<Eigen::Index>(Y.basis().size());
  if (values.size() != k) throw DimensionError("one value per basis vector is required");
  if (k == 0) return CVector::Zero(X.dim());
  ExtensionProblem prob{X, CMatrix(X.dim(), k), values};
  for (Eigen::Index j = 0; j < k; ++j) prob.B.col(j) = Y.basis()[static_cast<std::size_t>(j)];
  if (values.norm() == 0.0) return CVector::Zero(X.dim());

  Rng rng(seed);
  Eigen::VectorXd best;
  double best_val = std::numeric_limits<double>::infinity();
  for (int start = 0; start < 3; ++start) {
    Eigen::VectorXd u0 = start == 0 ? Eigen::VectorXd::Zero(2 * k) : to_real(rng.gaussian(static_cast<int>(k)));
    const Eigen::VectorXd u = newton_solve(prob, u0);
    const double v = prob.value(from_real(u));
    if (v < best_val) {
      best_val = v;
      best = u;
    }
    if (prob.gradient(from_real(best)).norm() <= 1e-12 * values.norm()) break;
  }
  return duality(X, prob.B * from_real(best), false);
}

std::string linearity_verdict(double defect) {
  if (defect < 1e-8) return "linear";
  if (defect > 1e-5) return "nonlinear";
  return "inconclusive";
}

Certificate hb_linearity_probe(const Subspace& Y, int trials, std::uint64_t seed) {
  const int k = static_cast<int>(Y.basis().size());
  if (k < 2) throw PreconditionError("dimension", "linearity probe needs a subspace of dimension >= 2");
  Certificate cert;
  cert.check = "hb-linearity";
  cert.seed = seed;
  Rng rng(seed);
  const Space& X = Y.ambient();
  double worst = -1.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = rng.next_seed();
    CVector c1 = rng.gaussian(k), c2 = rng.gaussian(k);
    CVector g1 = hahn_banach_extend(Y, c1, s);
    const double n1 = dual_norm(X, g1);
    c1 /= n1;
    g1 /= n1;
    CVector g2 = hahn_banach_extend(Y, c2, s);
    const double n2 = dual_norm(X, g2);
    c2 /= n2;
    g2 /= n2;
    const CVector g12 = hahn_banach_extend(Y, c1 + c2, s);
    const double defect = dual_norm(X, g12 - g1 - g2);
    ++cert.trials;
    if (defect > worst) {
      worst = defect;
      cert.witnesses = {c1, c2};
    }
    if (worst > 1e-3) break;
  }
  cert.value = std::max(0.0, worst);
  cert.residuals = {cert.value};
  cert.verdict = linearity_verdict(cert.value);
  cert.note = "witnesses are the values of f and g on the basis of Y";
  return cert;
}

CVector star_adjoint_eval(const Operator& T, const CVector& x) {
  if (!T.square()) throw PreconditionError("operator", "T_* is defined for operators on one space");
  const Space& X = T.domain();
  X.check(x);
  const CVector fx = duality(X, x, false);
  const CVector g = T.matrix().transpose() * fx;
  return duality(X.dual(), g, false);
}

Certificate star_linearity_probe(const Operator& T, int trials, std::uint64_t seed) {
  Certificate cert;
  cert.check = "star-linearity";
  cert.seed = seed;
  const Space& X = T.domain();
  Rng rng(seed);
  double worst = -1.0;
  for (int t = 0; t < trials; ++t) {
    const CVector u = rng.unit(X);
    const CVector v = rng.unit(X);
    const double defect =
        X.norm(star_adjoint_eval(T, u + v) - star_adjoint_eval(T, u) - star_adjoint_eval(T, v));
    ++cert.trials;
    if (defect > worst) {
      worst = defect;
      cert.witnesses = {u, v};
    }
  }
  cert.value = std::max(0.0, worst);
  cert.residuals = {cert.value};
  cert.verdict = linearity_verdict(cert.value);
  return cert;
}

}  // namespace bjlab
