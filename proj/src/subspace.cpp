#include "bjlab/subspace.hpp"

#include <algorithm>

#include "bjlab/random.hpp"

namespace bjlab {

CMatrix orthonormal_frame(const CMatrix& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return CMatrix(m.rows(), 0);
  int r = 0;
  while (r < s.size() && s[r] > rel_tol * s[0]) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix kernel_frame(const CMatrix& m, double rel_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return CMatrix::Identity(n, n);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  if (smax == 0.0) return CMatrix::Identity(n, n);
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > rel_tol * smax) ++r;
  return svd.matrixV().rightCols(n - r);
}

Subspace Subspace::span(const Space& ambient, const std::vector<CVector>& vectors) {
  CMatrix m(ambient.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ambient.check(vectors[i]);
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return Subspace(ambient, vectors, orthonormal_frame(m));
}

Subspace Subspace::from_columns(const Space& ambient, const CMatrix& columns) {
  if (columns.rows() != ambient.dim()) throw DimensionError("subspace columns do not match the ambient dimension");
  std::vector<CVector> b;
  for (Eigen::Index i = 0; i < columns.cols(); ++i) b.push_back(columns.col(i));
  return Subspace(ambient, std::move(b), orthonormal_frame(columns));
}

Subspace Subspace::zero(const Space& ambient) { return Subspace(ambient, {}, CMatrix(ambient.dim(), 0)); }

Subspace Subspace::whole(const Space& ambient) {
  return from_columns(ambient, CMatrix::Identity(ambient.dim(), ambient.dim()));
}

Subspace Subspace::coordinates(const Space& ambient, const std::vector<int>& indices) {
  CMatrix m = CMatrix::Zero(ambient.dim(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= ambient.dim()) throw DimensionError("coordinate index out of range");
    m(indices[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return from_columns(ambient, m);
}

double Subspace::relative_residual(const CVector& v) const {
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  return (v - project(v)).norm() / nv;
}

bool Subspace::contains(const CVector& v, double tol) const { return relative_residual(v) <= tol; }

CVector Subspace::project(const CVector& v) const {
  if (dim() == 0) return CVector::Zero(v.size());
  return frame_ * (frame_.adjoint() * v);
}

CVector Subspace::sample_unit(std::uint64_t seed) const {
  if (dim() == 0) throw PreconditionError("subspace", "cannot sample the zero subspace");
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    CVector v = frame_ * rng.gaussian(dim());
    const double nv = ambient_.norm(v);
    if (nv > 1e-12) return v / nv;
  }
  throw LabError("sampling", "subspace sample has zero norm in " + ambient_.describe());
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient());
  // principal vectors with cosine 1 span the intersection
  Eigen::BDCSVD<CMatrix> svd(a.frame().adjoint() * b.frame(), Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int r = 0;
  while (r < s.size() && s[r] > 1.0 - 1e-10) ++r;
  return Subspace::from_columns(a.ambient(), a.frame() * svd.matrixU().leftCols(r));
}

Subspace sum(const Subspace& a, const Subspace& b) {
  CMatrix m(a.ambient().dim(), a.dim() + b.dim());
  m << a.frame(), b.frame();
  return Subspace::from_columns(a.ambient(), m);
}

Subspace complement(const Subspace& a) {
  if (a.dim() == 0) return Subspace::whole(a.ambient());
  return Subspace::from_columns(a.ambient(), kernel_frame(a.frame().adjoint(), 1e-10));
}

Subspace image(const CMatrix& m, const Subspace& a) {
  if (m.cols() != a.ambient().dim() || m.rows() != a.ambient().dim())
    throw DimensionError("image needs a square matrix on the ambient coefficients");
  if (a.dim() == 0) return a;
  return Subspace::from_columns(a.ambient(), m * a.frame());
}

double distance(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  // sine of the largest angle, computed from the residual to stay accurate near 0
  const CMatrix r = a.frame() - b.frame() * (b.frame().adjoint() * a.frame());
  Eigen::BDCSVD<CMatrix> svd(r);
  return std::min(1.0, svd.singularValues()[0]);
}

bool is_subset(const Subspace& a, const Subspace& b, double tol) {
  if (a.dim() == 0) return true;
  const CMatrix r = a.frame() - b.frame() * (b.frame().adjoint() * a.frame());
  return r.norm() <= tol * std::sqrt(static_cast<double>(a.dim()));
}

}  // namespace bjlab
