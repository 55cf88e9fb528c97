#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bjlab {

struct RunOptions {
  std::uint64_t seed = 1;
  double tol_scale = 1.0;  // multiplies default tolerances; violation thresholds are never loosened
  int horizon = 0;         // 0 = entry default
  int window = 0;          // 0 = entry default
  std::string fault;       // "corrupt-V" perturbs dilation operators before verification
};

struct Assertion {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string witness;  // compact description of the witness when one is attached

  bool operator==(const Assertion&) const = default;
};

/// Collects assertions while an entry runs.
class Checks {
 public:
  explicit Checks(const RunOptions& opt) : opt_(opt) {}

  /// value <= tol * tol_scale
  void at_most(const std::string& name, double value, double tol);
  /// |value - expected| <= tol * tol_scale; the recorded value is the deviation
  void near(const std::string& name, double value, double expected, double tol);
  /// value < bound at default tolerance (violation-type checks, never scaled)
  void below(const std::string& name, double value, double bound);
  /// value > bound, never scaled
  void above(const std::string& name, double value, double bound);
  void holds(const std::string& name, bool ok, const std::string& witness = "");

  void witness(const std::string& w);
  const std::vector<Assertion>& assertions() const { return list_; }
  const RunOptions& options() const { return opt_; }

 private:
  RunOptions opt_;
  std::vector<Assertion> list_;
};

struct GalleryEntry {
  std::string id;
  std::string anchor;  // example in the source text; empty for property checks
  std::vector<std::string> suites;
  std::function<void(Checks&)> run;
};

const std::vector<GalleryEntry>& registry();
/// Anchors that must each be covered by exactly one registry entry.
const std::vector<std::string>& required_anchors();

struct ExampleReport {
  std::string id;
  bool pass = false;
  std::vector<Assertion> assertions;
  double seconds = 0.0;
  std::string error;  // set when the entry threw

  bool operator==(const ExampleReport&) const = default;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 1;
  bool pass = false;
  std::vector<ExampleReport> items;

  bool operator==(const SuiteReport&) const = default;
};

const std::vector<std::string>& suite_names();

/// Throws LabError("unknown-id") for unregistered ids.
ExampleReport run_counterexample(const std::string& id, const RunOptions& opt = {});
/// Runs every entry tagged with the suite (all = everything), at most `threads` at a time.
SuiteReport run_suite(const std::string& name, const RunOptions& opt = {}, int threads = 1);

nlohmann::json to_json(const ExampleReport& r, bool timings = true);
nlohmann::json to_json(const SuiteReport& r);
ExampleReport example_report_from_json(const nlohmann::json& j);
SuiteReport suite_report_from_json(const nlohmann::json& j);

/// Header id,assertion,value,tolerance,pass.
std::string report_csv(const nlohmann::json& report);

}  // namespace bjlab
