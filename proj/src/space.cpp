#include "bjlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bjlab/random.hpp"

namespace bjlab {

struct Space::Node {
  SpaceKind kind = SpaceKind::lp;
  int dim = 0;
  // lp
  double p = 2.0;
  RVector weights;
  bool unit_weights = true;
  // composites
  std::vector<Space> parts;
  std::vector<int> offsets;
  int blocks = 0;
  int halfwidth = 0;
  // poly_sup
  int degree = 0;
  int gridsize = 0;
  CMatrix powers;  // gridsize x (degree+1), z_g^k
  // renormed
  CMatrix op;
  std::string cert_id;
  bool seminorm = false;
};

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError("space", msg);
}

std::string exponent_str(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

double lp_norm(const CVector& v, double p, const RVector& w, bool unit) {
  const int n = static_cast<int>(v.size());
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, (unit ? 1.0 : w[i]) * std::abs(v[i]));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (unit ? 1.0 : w[i]) * std::abs(v[i]);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (unit ? 1.0 : w[i]) * std::norm(v[i]);
    return std::sqrt(s);
  }
  // scale by the largest modulus to keep pow() in range
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(v[i]));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (unit ? 1.0 : w[i]) * std::pow(std::abs(v[i]) / scale, p);
  return scale * std::pow(s, 1.0 / p);
}

}  // namespace

double dual_exponent(double p) {
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Space Space::lp(int n, double p, std::vector<double> weights) {
  require(n > 0, "lp dimension must be positive");
  require(p >= 1.0, "lp exponent must be >= 1");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::lp;
  node->dim = n;
  node->p = p;
  node->weights = RVector::Ones(n);
  if (!weights.empty()) {
    require(static_cast<int>(weights.size()) == n, "weights length must equal n");
    for (int i = 0; i < n; ++i) {
      require(weights[i] > 0.0 && std::isfinite(weights[i]), "weights must be positive");
      node->weights[i] = weights[i];
      if (weights[i] != 1.0) node->unit_weights = false;
    }
  }
  return Space(node);
}

Space Space::direct_sum(std::vector<Space> parts) {
  require(!parts.empty(), "direct sum needs at least one part");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::direct_sum2;
  int off = 0;
  for (const auto& s : parts) {
    node->offsets.push_back(off);
    off += s.dim();
  }
  node->dim = off;
  node->parts = std::move(parts);
  return Space(node);
}

Space Space::block_seq(const Space& base, int blocks) {
  require(blocks > 0, "block count must be positive");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::block_seq;
  node->parts = {base};
  node->blocks = blocks;
  node->dim = base.dim() * blocks;
  return Space(node);
}

Space Space::bi_block_seq(const Space& base, int halfwidth) {
  require(halfwidth >= 0, "halfwidth must be nonnegative");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::bi_block_seq;
  node->parts = {base};
  node->halfwidth = halfwidth;
  node->blocks = 2 * halfwidth + 1;
  node->dim = base.dim() * node->blocks;
  return Space(node);
}

Space Space::poly_sup(int degree, int gridsize) {
  require(degree >= 0, "degree must be nonnegative");
  require(gridsize >= 8, "gridsize must be at least 8");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::poly_sup;
  node->degree = degree;
  node->gridsize = gridsize;
  node->dim = degree + 1;
  node->powers.resize(gridsize, degree + 1);
  for (int g = 0; g < gridsize; ++g) {
    for (int k = 0; k <= degree; ++k) {
      // exact angle per power avoids drift from repeated multiplication
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(g) * k) % gridsize) /
                           gridsize;
      node->powers(g, k) = std::polar(1.0, angle);
    }
  }
  return Space(node);
}

Space Space::renormed(const Space& base, const NormCertificate& cert) {
  if (cert.verdict == NormVerdict::violation)
    throw PreconditionError("certificate", "renormed space refused: certificate " + cert.id +
                                               " reports a triangle violation");
  require(cert.op.rows() == base.dim() && cert.op.cols() == base.dim(),
          "certificate operator does not act on the base space");
  auto node = std::make_shared<Node>();
  node->kind = SpaceKind::renormed;
  node->dim = base.dim();
  node->parts = {base};
  node->op = cert.op;
  node->cert_id = cert.id;
  node->seminorm = cert.verdict == NormVerdict::semi_norm;
  return Space(node);
}

SpaceKind Space::kind() const { return node_->kind; }
int Space::dim() const { return node_->dim; }
double Space::p() const { return node_->p; }
const RVector& Space::weights() const { return node_->weights; }
const std::vector<Space>& Space::parts() const { return node_->parts; }
const Space& Space::base() const {
  require(!node_->parts.empty() && node_->kind != SpaceKind::direct_sum2, "space has no base");
  return node_->parts.front();
}
int Space::blocks() const { return node_->blocks; }
int Space::halfwidth() const { return node_->halfwidth; }
int Space::degree() const { return node_->degree; }
int Space::gridsize() const { return node_->gridsize; }
const CMatrix& Space::renorm_operator() const { return node_->op; }
const std::string& Space::certificate_id() const { return node_->cert_id; }
bool Space::is_seminorm() const { return node_->seminorm; }

int Space::block_dim() const {
  require(kind() == SpaceKind::block_seq || kind() == SpaceKind::bi_block_seq, "not a block sequence");
  return base().dim();
}

int Space::block_offset(int index) const {
  if (kind() == SpaceKind::block_seq) {
    if (index < 0 || index >= blocks())
      throw PreconditionError("window", "block index " + std::to_string(index) + " outside 0.." +
                                            std::to_string(blocks() - 1));
    return index * block_dim();
  }
  if (kind() == SpaceKind::bi_block_seq) {
    if (index < -halfwidth() || index > halfwidth())
      throw PreconditionError("window", "block index " + std::to_string(index) + " outside -" +
                                            std::to_string(halfwidth()) + ".." + std::to_string(halfwidth()));
    return (index + halfwidth()) * block_dim();
  }
  throw PreconditionError("space", "block_offset on a space without blocks");
}

void Space::check(const CVector& v) const {
  if (v.size() != dim())
    throw DimensionError("vector of length " + std::to_string(v.size()) + " does not belong to " + describe() +
                         " (dim " + std::to_string(dim()) + ")");
}

double Space::norm(const CVector& v) const {
  check(v);
  const Node& n = *node_;
  switch (n.kind) {
    case SpaceKind::lp:
      return lp_norm(v, n.p, n.weights, n.unit_weights);
    case SpaceKind::direct_sum2: {
      double s = 0.0;
      for (std::size_t i = 0; i < n.parts.size(); ++i) {
        const double t = n.parts[i].norm(v.segment(n.offsets[i], n.parts[i].dim()));
        s += t * t;
      }
      return std::sqrt(s);
    }
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq: {
      const Space& b = n.parts.front();
      const int d = b.dim();
      double s = 0.0;
      for (int k = 0; k < n.blocks; ++k) {
        const auto seg = v.segment(k * d, d);
        if (seg.isZero(0.0)) continue;
        const double t = b.norm(seg);
        s += t * t;
      }
      return std::sqrt(s);
    }
    case SpaceKind::poly_sup:
      return (n.powers * v).cwiseAbs().maxCoeff();
    case SpaceKind::renormed: {
      const Space& b = n.parts.front();
      const double x = b.norm(v);
      const double tx = b.norm(n.op * v);
      return std::sqrt(std::max(0.0, x * x - tx * tx));
    }
  }
  return 0.0;
}

std::optional<RVector> Space::euclidean_weights() const {
  const Node& n = *node_;
  switch (n.kind) {
    case SpaceKind::lp:
      if (n.p == 2.0) return n.weights;
      if (n.dim == 1) {
        // one coordinate: |x| * w^(1/p) for every p
        RVector w(1);
        w[0] = std::isinf(n.p) ? n.weights[0] * n.weights[0] : std::pow(n.weights[0], 2.0 / n.p);
        return w;
      }
      return std::nullopt;
    case SpaceKind::direct_sum2: {
      RVector w(n.dim);
      for (std::size_t i = 0; i < n.parts.size(); ++i) {
        auto pw = n.parts[i].euclidean_weights();
        if (!pw) return std::nullopt;
        w.segment(n.offsets[i], n.parts[i].dim()) = *pw;
      }
      return w;
    }
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq: {
      auto bw = n.parts.front().euclidean_weights();
      if (!bw) return std::nullopt;
      RVector w(n.dim);
      for (int k = 0; k < n.blocks; ++k) w.segment(k * bw->size(), bw->size()) = *bw;
      return w;
    }
    default:
      return std::nullopt;
  }
}

std::vector<std::pair<int, Space>> Space::lp_leaves() const {
  std::vector<std::pair<int, Space>> out;
  const Node& n = *node_;
  switch (n.kind) {
    case SpaceKind::lp:
      out.emplace_back(0, *this);
      break;
    case SpaceKind::direct_sum2:
      for (std::size_t i = 0; i < n.parts.size(); ++i)
        for (auto& [off, leaf] : n.parts[i].lp_leaves()) out.emplace_back(off + n.offsets[i], leaf);
      break;
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq: {
      const auto inner = n.parts.front().lp_leaves();
      const int d = n.parts.front().dim();
      for (int k = 0; k < n.blocks; ++k)
        for (auto& [off, leaf] : inner) out.emplace_back(off + k * d, leaf);
      break;
    }
    default:
      break;
  }
  return out;
}

bool Space::is_lp_family() const {
  switch (kind()) {
    case SpaceKind::lp:
      return true;
    case SpaceKind::direct_sum2:
      return std::all_of(parts().begin(), parts().end(), [](const Space& s) { return s.is_lp_family(); });
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq:
      return base().is_lp_family();
    default:
      return false;
  }
}

bool Space::is_smooth_lp() const {
  switch (kind()) {
    case SpaceKind::lp:
      return (p() > 1.0 && !std::isinf(p())) || dim() == 1;
    case SpaceKind::direct_sum2:
      return std::all_of(parts().begin(), parts().end(), [](const Space& s) { return s.is_smooth_lp(); });
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq:
      return base().is_smooth_lp();
    default:
      return false;
  }
}

Space Space::dual() const {
  switch (kind()) {
    case SpaceKind::lp: {
      const double q = dual_exponent(p());
      std::vector<double> w(dim());
      for (int i = 0; i < dim(); ++i) {
        const double wi = weights()[i];
        if (p() == 1.0 || std::isinf(p()))
          w[i] = 1.0 / wi;
        else
          w[i] = std::pow(wi, 1.0 - q);
      }
      return lp(dim(), q, w);
    }
    case SpaceKind::direct_sum2: {
      std::vector<Space> d;
      for (const auto& s : parts()) d.push_back(s.dual());
      return direct_sum(std::move(d));
    }
    case SpaceKind::block_seq:
      return block_seq(base().dual(), blocks());
    case SpaceKind::bi_block_seq:
      return bi_block_seq(base().dual(), halfwidth());
    default:
      throw PreconditionError("dual", "no coefficient dual available for " + describe());
  }
}

bool Space::same_as(const Space& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || dim() != other.dim()) return false;
  switch (kind()) {
    case SpaceKind::lp:
      return p() == other.p() && weights() == other.weights();
    case SpaceKind::direct_sum2:
      if (parts().size() != other.parts().size()) return false;
      for (std::size_t i = 0; i < parts().size(); ++i)
        if (!parts()[i].same_as(other.parts()[i])) return false;
      return true;
    case SpaceKind::block_seq:
    case SpaceKind::bi_block_seq:
      return blocks() == other.blocks() && base().same_as(other.base());
    case SpaceKind::poly_sup:
      return degree() == other.degree() && gridsize() == other.gridsize();
    case SpaceKind::renormed:
      return certificate_id() == other.certificate_id() && base().same_as(other.base());
  }
  return false;
}

std::string Space::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case SpaceKind::lp:
      os << "l" << exponent_str(p()) << "^" << dim();
      if (!node_->unit_weights) os << "(weighted)";
      break;
    case SpaceKind::direct_sum2:
      os << "(";
      for (std::size_t i = 0; i < parts().size(); ++i) os << (i ? " (+)2 " : "") << parts()[i].describe();
      os << ")";
      break;
    case SpaceKind::block_seq:
      os << "l2(" << base().describe() << ")[" << blocks() << "]";
      break;
    case SpaceKind::bi_block_seq:
      os << "l2(Z," << base().describe() << ")[-" << halfwidth() << ".." << halfwidth() << "]";
      break;
    case SpaceKind::poly_sup:
      os << "PolySup(deg " << degree() << ", grid " << gridsize() << ")";
      break;
    case SpaceKind::renormed:
      os << "(" << base().describe() << ", A_T)[" << certificate_id() << "]";
      break;
  }
  return os.str();
}

nlohmann::json Space::to_json() const {
  nlohmann::json j;
  switch (kind()) {
    case SpaceKind::lp: {
      j["kind"] = "lp";
      j["n"] = dim();
      if (std::isinf(p()))
        j["p"] = "inf";
      else
        j["p"] = p();
      j["weights"] = std::vector<double>(weights().data(), weights().data() + dim());
      break;
    }
    case SpaceKind::direct_sum2: {
      j["kind"] = "direct_sum2";
      j["parts"] = nlohmann::json::array();
      for (const auto& s : parts()) j["parts"].push_back(s.to_json());
      break;
    }
    case SpaceKind::block_seq:
      j["kind"] = "block_seq";
      j["base"] = base().to_json();
      j["blocks"] = blocks();
      break;
    case SpaceKind::bi_block_seq:
      j["kind"] = "bi_block_seq";
      j["base"] = base().to_json();
      j["halfwidth"] = halfwidth();
      break;
    case SpaceKind::poly_sup:
      j["kind"] = "poly_sup";
      j["degree"] = degree();
      j["gridsize"] = gridsize();
      break;
    case SpaceKind::renormed:
      j["kind"] = "renormed";
      j["base"] = base().to_json();
      j["certificate"] = certificate_id();
      break;
  }
  return j;
}

Space Space::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lp") {
    const int n = j.at("n").get<int>();
    double p = 2.0;
    const auto& pj = j.at("p");
    if (pj.is_string()) {
      require(pj.get<std::string>() == "inf", "p must be a number or \"inf\"");
      p = kInf;
    } else {
      p = pj.get<double>();
    }
    std::vector<double> w;
    if (j.contains("weights")) w = j.at("weights").get<std::vector<double>>();
    return lp(n, p, w);
  }
  if (kind == "direct_sum2") {
    std::vector<Space> parts;
    for (const auto& pj : j.at("parts")) parts.push_back(from_json(pj));
    return direct_sum(std::move(parts));
  }
  if (kind == "block_seq") return block_seq(from_json(j.at("base")), j.at("blocks").get<int>());
  if (kind == "bi_block_seq") return bi_block_seq(from_json(j.at("base")), j.at("halfwidth").get<int>());
  if (kind == "poly_sup") return poly_sup(j.at("degree").get<int>(), j.value("gridsize", 4096));
  if (kind == "renormed")
    throw PreconditionError("certificate", "renormed spaces are rebuilt from a norm certificate, not from JSON");
  throw PreconditionError("space", "unknown space kind '" + kind + "'");
}

CVector embed_block(const Space& space, int index, const CVector& x) {
  const int off = space.block_offset(index);
  space.base().check(x);
  CVector v = CVector::Zero(space.dim());
  v.segment(off, x.size()) = x;
  return v;
}

CVector extract_block(const Space& space, int index, const CVector& v) {
  space.check(v);
  return v.segment(space.block_offset(index), space.block_dim());
}

CVector random_unit(const Space& space, std::uint64_t seed) {
  Rng rng(seed);
  return rng.unit(space);
}

}  // namespace bjlab
