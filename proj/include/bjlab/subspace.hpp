#pragma once

#include <vector>

#include "bjlab/space.hpp"

namespace bjlab {

/// Finite-dimensional subspace of a Space.
///
/// Keeps the basis it was built from plus an orthonormal coordinate frame
/// (Euclidean in the coefficients, not in the ambient norm) used for rank,
/// kernel and intersection arithmetic.
class Subspace {
 public:
  /// Span of the given vectors; dependent vectors are allowed and dropped from the frame.
  static Subspace span(const Space& ambient, const std::vector<CVector>& vectors);
  static Subspace from_columns(const Space& ambient, const CMatrix& columns);
  static Subspace zero(const Space& ambient);
  static Subspace whole(const Space& ambient);
  static Subspace coordinates(const Space& ambient, const std::vector<int>& indices);

  const Space& ambient() const { return ambient_; }
  const std::vector<CVector>& basis() const { return basis_; }
  const CMatrix& frame() const { return frame_; }
  int dim() const { return static_cast<int>(frame_.cols()); }
  /// True when the given basis was linearly independent.
  bool independent() const { return static_cast<int>(basis_.size()) == dim(); }

  /// Euclidean distance from v to the subspace, relative to |v|.
  double relative_residual(const CVector& v) const;
  bool contains(const CVector& v, double tol = 1e-8) const;
  CVector project(const CVector& v) const;

  /// Random vector in the subspace (Gaussian frame coefficients), normalized in the ambient norm.
  CVector sample_unit(std::uint64_t seed) const;

 private:
  Subspace(Space ambient, std::vector<CVector> basis, CMatrix frame)
      : ambient_(std::move(ambient)), basis_(std::move(basis)), frame_(std::move(frame)) {}
  Space ambient_;
  std::vector<CVector> basis_;
  CMatrix frame_;
};

/// Orthonormal basis for the column span; columns below rel_tol * sigma_max are dropped.
CMatrix orthonormal_frame(const CMatrix& m, double rel_tol = 1e-10);
/// Orthonormal basis of ker(m), singular values below rel_tol * sigma_max count as zero.
CMatrix kernel_frame(const CMatrix& m, double rel_tol = 1e-9);

Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
/// Euclidean orthogonal complement inside the ambient coefficients.
Subspace complement(const Subspace& a);
/// Image of a subspace under a matrix acting on the same coefficients.
Subspace image(const CMatrix& m, const Subspace& a);
/// Sine of the largest principal angle; 1 when dimensions differ.
double distance(const Subspace& a, const Subspace& b);
bool is_subset(const Subspace& a, const Subspace& b, double tol = 1e-8);

}  // namespace bjlab
