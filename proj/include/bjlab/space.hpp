#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bjlab/certificate.hpp"
#include "bjlab/types.hpp"

namespace bjlab {

enum class SpaceKind { lp, direct_sum2, block_seq, bi_block_seq, poly_sup, renormed };

/// Immutable descriptor of a finite-dimensional normed space.
///
/// Every space is a coefficient space C^dim with a norm. Composite kinds nest:
/// DirectSum2 and the block sequences carry the outer l2 combination of their
/// parts. BiBlockSeq blocks are indexed -N..N; coefficient block k lives at
/// slot k + N. Copies share the underlying node.
class Space {
 public:
  static Space lp(int n, double p, std::vector<double> weights = {});
  static Space direct_sum(std::vector<Space> parts);
  static Space block_seq(const Space& base, int blocks);
  static Space bi_block_seq(const Space& base, int halfwidth);
  static Space poly_sup(int degree, int gridsize = 4096);
  /// (X, A_T). Refused unless the certificate verdict is norm or semi-norm.
  static Space renormed(const Space& base, const NormCertificate& cert);

  SpaceKind kind() const;
  int dim() const;

  double p() const;
  const RVector& weights() const;
  const std::vector<Space>& parts() const;
  const Space& base() const;
  int blocks() const;      // block_seq: count; bi_block_seq: 2N+1
  int halfwidth() const;
  int degree() const;
  int gridsize() const;
  const CMatrix& renorm_operator() const;
  const std::string& certificate_id() const;
  bool is_seminorm() const;

  /// Offset of block `index` (bi_block_seq: index in -N..N).
  int block_offset(int index) const;
  int block_dim() const;

  double norm(const CVector& v) const;
  void check(const CVector& v) const;

  /// Weighted l2 structure if every leaf is an l2 space (not renormed / poly).
  std::optional<RVector> euclidean_weights() const;
  /// True when every leaf is lp with 1 < p < inf.
  bool is_smooth_lp() const;
  /// True when every leaf is lp (any p).
  bool is_lp_family() const;
  /// Each lp leaf and its coefficient offset.
  std::vector<std::pair<int, Space>> lp_leaves() const;

  Space dual() const;

  std::string describe() const;
  nlohmann::json to_json() const;
  static Space from_json(const nlohmann::json& j);

  bool same_as(const Space& other) const;

 private:
  struct Node;
  explicit Space(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Conjugate exponent; 1 <-> inf.
double dual_exponent(double p);

/// x placed in one block of a BlockSeq / BiBlockSeq, zeros elsewhere.
CVector embed_block(const Space& space, int index, const CVector& x);
CVector extract_block(const Space& space, int index, const CVector& v);

/// Complex Gaussian coordinates divided by the norm; reproducible per seed.
CVector random_unit(const Space& space, std::uint64_t seed);

}  // namespace bjlab
