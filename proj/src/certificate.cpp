#include "bjlab/certificate.hpp"

namespace bjlab {

std::string to_string(NormVerdict v) {
  switch (v) {
    case NormVerdict::norm:
      return "norm";
    case NormVerdict::semi_norm:
      return "semi-norm";
    case NormVerdict::violation:
      return "violation";
  }
  return "violation";
}

nlohmann::json vector_to_json(const CVector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back({v[i].real(), v[i].imag()});
  return j;
}

CVector vector_from_json(const nlohmann::json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (e.is_array())
      v[static_cast<Eigen::Index>(i)] = {e.at(0).get<double>(), e.at(1).get<double>()};
    else
      v[static_cast<Eigen::Index>(i)] = {e.get<double>(), 0.0};
  }
  return v;
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j;
  j["check"] = c.check;
  j["verdict"] = c.verdict;
  j["defect"] = c.value;
  j["witness"] = c.witnesses.empty() ? nlohmann::json::array() : vector_to_json(c.witnesses.front());
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : c.witnesses) j["witnesses"].push_back(vector_to_json(w));
  j["residuals"] = c.residuals;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate c;
  c.check = j.value("check", "");
  c.verdict = j.at("verdict").get<std::string>();
  c.value = j.at("defect").get<double>();
  if (j.contains("witnesses"))
    for (const auto& w : j.at("witnesses")) c.witnesses.push_back(vector_from_json(w));
  if (j.contains("residuals")) c.residuals = j.at("residuals").get<std::vector<double>>();
  c.seed = j.value("seed", std::uint64_t{0});
  c.trials = j.value("trials", 0);
  c.note = j.value("note", "");
  return c;
}

nlohmann::json to_json(const NormCertificate& c) {
  nlohmann::json j;
  j["id"] = c.id;
  j["verdict"] = to_string(c.verdict);
  j["margin"] = c.margin;
  j["min_on_sphere"] = c.min_on_sphere;
  if (c.witness_x.size()) j["witness"] = {vector_to_json(c.witness_x), vector_to_json(c.witness_y)};
  if (c.positivity_witness.size()) j["positivity_witness"] = vector_to_json(c.positivity_witness);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  return j;
}

}  // namespace bjlab
