#include "bjlab/operator.hpp"

#include "bjlab/functionals.hpp"

namespace bjlab {

namespace {

CMatrix shift_matrix(const Space& s, int step) {
  if (s.kind() != SpaceKind::block_seq && s.kind() != SpaceKind::bi_block_seq)
    throw PreconditionError("annotation", "shift tag needs a block sequence space");
  const int d = s.block_dim();
  const int nb = s.blocks();
  CMatrix m = CMatrix::Zero(s.dim(), s.dim());
  for (int k = 0; k < nb; ++k) {
    const int t = k + step;
    if (t < 0 || t >= nb) continue;
    m.block(t * d, k * d, d, d).setIdentity();
  }
  return m;
}

nlohmann::json tag_to_json(const Annotation& tag) {
  return std::visit(
      [](const auto& t) -> nlohmann::json {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, DiagonalTag>) {
          return {{"kind", "diagonal"}, {"values", vector_to_json(t.values)}};
        } else if constexpr (std::is_same_v<T, MonomialTag>) {
          return {{"kind", "monomial"}, {"targets", t.targets}, {"coeffs", vector_to_json(t.coeffs)}};
        } else if constexpr (std::is_same_v<T, RankOneTag>) {
          return {{"kind", "rank_one"},
                  {"x", vector_to_json(t.x)},
                  {"y", vector_to_json(t.y)},
                  {"scale", {t.scale.real(), t.scale.imag()}}};
        } else {
          return {{"kind", "shift"}, {"step", t.step}};
        }
      },
      tag);
}

Annotation tag_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::monostate{};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "diagonal") return DiagonalTag{vector_from_json(j.at("values"))};
  if (kind == "monomial")
    return MonomialTag{j.at("targets").get<std::vector<int>>(), vector_from_json(j.at("coeffs"))};
  if (kind == "rank_one") {
    RankOneTag t{vector_from_json(j.at("x")), vector_from_json(j.at("y"))};
    if (j.contains("scale")) t.scale = vector_from_json(nlohmann::json::array({j.at("scale")}))[0];
    return t;
  }
  if (kind == "shift") return ShiftTag{j.at("step").get<int>()};
  throw PreconditionError("annotation", "unknown annotation kind '" + kind + "'");
}

CMatrix matrix_from_json(const nlohmann::json& j, int rows, int cols) {
  CMatrix m = CMatrix::Zero(rows, cols);
  auto fill = [&](const nlohmann::json& a, bool imag) {
    std::vector<double> flat;
    if (!a.empty() && a[0].is_array()) {
      for (const auto& row : a)
        for (const auto& v : row) flat.push_back(v.get<double>());
    } else {
      flat = a.get<std::vector<double>>();
    }
    if (static_cast<int>(flat.size()) != rows * cols)
      throw DimensionError("operator entries do not match rows x cols");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const double v = flat[static_cast<std::size_t>(r * cols + c)];
        if (imag)
          m(r, c).imag(v);
        else
          m(r, c).real(v);
      }
  };
  fill(j.at("re"), false);
  if (j.contains("im")) fill(j.at("im"), true);
  return m;
}

}  // namespace

CMatrix tag_matrix(const Annotation& tag, const Space& domain, const Space& codomain) {
  const int rows = codomain.dim();
  const int cols = domain.dim();
  return std::visit(
      [&](const auto& t) -> CMatrix {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return CMatrix(rows, cols);
        } else if constexpr (std::is_same_v<T, DiagonalTag>) {
          if (t.values.size() != cols || rows != cols) throw DimensionError("diagonal tag size mismatch");
          return t.values.asDiagonal();
        } else if constexpr (std::is_same_v<T, MonomialTag>) {
          if (static_cast<int>(t.targets.size()) != cols || t.coeffs.size() != cols)
            throw DimensionError("monomial tag size mismatch");
          CMatrix m = CMatrix::Zero(rows, cols);
          for (int j = 0; j < cols; ++j) {
            const int target = t.targets[static_cast<std::size_t>(j)];
            if (target >= 0 && target < rows) m(target, j) = t.coeffs[j];
          }
          return m;
        } else if constexpr (std::is_same_v<T, RankOneTag>) {
          const CVector f = support_functional(domain, t.x);
          codomain.check(t.y);
          return t.scale * t.y * f.transpose();
        } else {
          if (!domain.same_as(codomain)) throw PreconditionError("annotation", "shift tag needs a square operator");
          return shift_matrix(domain, t.step);
        }
      },
      tag);
}

Operator::Operator(CMatrix entries, Space domain, Space codomain, Annotation tag)
    : m_(std::move(entries)), domain_(std::move(domain)), codomain_(std::move(codomain)), tag_(std::move(tag)) {
  if (m_.rows() != codomain_.dim() || m_.cols() != domain_.dim())
    throw DimensionError("operator of shape " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                         " does not map " + domain_.describe() + " to " + codomain_.describe());
  if (!std::holds_alternative<std::monostate>(tag_)) {
    const CMatrix expected = tag_matrix(tag_, domain_, codomain_);
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((expected - m_).cwiseAbs().maxCoeff() > 1e-14 * scale)
      throw PreconditionError("annotation", "annotation does not reproduce the operator entries");
  }
}

CVector Operator::operator()(const CVector& x) const {
  domain_.check(x);
  return m_ * x;
}

Operator Operator::compose(const Operator& inner) const {
  if (!inner.codomain().same_as(domain_)) throw DimensionError("composition of operators on different spaces");
  return Operator(m_ * inner.matrix(), inner.domain(), codomain_);
}

Operator Operator::power(int k) const {
  if (!square()) throw PreconditionError("operator", "power of a non-square operator");
  CMatrix r = CMatrix::Identity(m_.rows(), m_.cols());
  for (int i = 0; i < k; ++i) r = m_ * r;
  return Operator(r, domain_);
}

Operator Operator::scaled(cplx a) const {
  Operator out(a * m_, domain_, codomain_);
  if (model_norm) out.model_norm = std::abs(a) * *model_norm;
  return out;
}

nlohmann::json Operator::to_json() const {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m_.rows(); ++r) {
    std::vector<double> rr, ii;
    for (Eigen::Index c = 0; c < m_.cols(); ++c) {
      rr.push_back(m_(r, c).real());
      ii.push_back(m_(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  nlohmann::json j = {{"rows", m_.rows()},         {"cols", m_.cols()},
                      {"re", re},                  {"im", im},
                      {"domain", domain_.to_json()}, {"codomain", codomain_.to_json()},
                      {"annotation", tag_to_json(tag_)}};
  if (model_norm) j["model_norm"] = *model_norm;
  return j;
}

Operator Operator::from_json(const nlohmann::json& j) {
  const Space dom = Space::from_json(j.at("domain"));
  const Space cod = j.contains("codomain") ? Space::from_json(j.at("codomain")) : dom;
  const int rows = j.value("rows", cod.dim());
  const int cols = j.value("cols", dom.dim());
  Annotation tag = j.contains("annotation") ? tag_from_json(j.at("annotation")) : Annotation{};
  Operator op(matrix_from_json(j, rows, cols), dom, cod, std::move(tag));
  if (j.contains("model_norm")) op.model_norm = j.at("model_norm").get<double>();
  return op;
}

Operator identity(const Space& space) {
  return Operator(CMatrix::Identity(space.dim(), space.dim()), space,
                  DiagonalTag{CVector::Ones(space.dim())});
}

Operator diagonal(const Space& space, const CVector& values) {
  DiagonalTag t{values};
  return Operator(tag_matrix(t, space, space), space, t);
}

Operator monomial(const Space& space, const std::vector<int>& targets, const CVector& coeffs) {
  MonomialTag t{targets, coeffs};
  return Operator(tag_matrix(t, space, space), space, t);
}

Operator rank_one(const Space& space, const CVector& x, const CVector& y, cplx scale) {
  RankOneTag t{x, y, scale};
  return Operator(tag_matrix(t, space, space), space, t);
}

}  // namespace bjlab
