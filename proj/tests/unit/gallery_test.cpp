#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

using namespace bjlab;

TEST(Gallery, RegistryCoversEveryAnchorOnce) {
  std::multiset<std::string> anchors;
  std::set<std::string> ids;
  for (const auto& e : registry()) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    if (!e.anchor.empty()) anchors.insert(e.anchor);
    EXPECT_FALSE(e.suites.empty()) << e.id;
  }
  for (const auto& a : required_anchors()) EXPECT_EQ(anchors.count(a), 1u) << a;
  EXPECT_EQ(anchors.size(), required_anchors().size());
}

TEST(Gallery, EverySuiteHasEntries) {
  for (const auto& s : suite_names()) {
    if (s == "all") continue;
    int n = 0;
    for (const auto& e : registry()) n += std::count(e.suites.begin(), e.suites.end(), s) > 0;
    EXPECT_GT(n, 0) << s;
  }
}

TEST(Gallery, NamedExamples) {
  const ExampleReport a = run_counterexample("ex6-case1-p1.5", {});
  EXPECT_TRUE(a.pass);
  const auto it = std::find_if(a.assertions.begin(), a.assertions.end(),
                               [](const Assertion& x) { return x.name == "margin"; });
  ASSERT_NE(it, a.assertions.end());
  EXPECT_NEAR(it->value, 1.428286 - 1.587401, 1e-6);
  EXPECT_TRUE(run_counterexample("cinf3-two-complements", {}).pass);
  EXPECT_THROW(run_counterexample("no-such-entry", {}), LabError);
}

TEST(Gallery, TolScaleNeverLoosensViolations) {
  RunOptions o;
  o.tol_scale = 1e6;
  const ExampleReport r = run_counterexample("ex6-case1-p1.5", o);
  for (const auto& a : r.assertions)
    if (a.name == "margin") EXPECT_EQ(a.tolerance, -0.15);
}

TEST(Gallery, SuiteIsDeterministic) {
  RunOptions o;
  o.seed = 1;
  const std::string a = to_json(run_suite("orthogonality", o, 1)).dump();
  const std::string b = to_json(run_suite("orthogonality", o, 2)).dump();
  EXPECT_EQ(a, b);
}

TEST(Gallery, HilbertCharacterizationSuite) {
  RunOptions o;
  o.seed = 7;
  const SuiteReport r = run_suite("hilbert-characterization", o, 1);
  EXPECT_TRUE(r.pass);
}

TEST(Gallery, FaultInjectionFailsWithWitness) {
  RunOptions o;
  o.seed = 3;
  o.fault = "corrupt-V";
  const SuiteReport r = run_suite("dilation", o, 1);
  EXPECT_FALSE(r.pass);
  bool witnessed = false;
  for (const auto& it : r.items)
    for (const auto& a : it.assertions) witnessed |= !a.pass && !a.witness.empty();
  EXPECT_TRUE(witnessed);
}

TEST(Gallery, JsonRoundTrip) {
  const ExampleReport r = run_counterexample("lp-disjoint-support", {});
  const ExampleReport back = example_report_from_json(nlohmann::json::parse(to_json(r).dump()));
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.pass, r.pass);
  EXPECT_EQ(back.assertions, r.assertions);
  SuiteReport s;
  s.suite = "x";
  s.seed = 5;
  s.pass = r.pass;
  s.items = {r};
  const nlohmann::json j = to_json(s);
  EXPECT_EQ(to_json(suite_report_from_json(nlohmann::json::parse(j.dump()))), j);
}

TEST(Gallery, CsvFlattensAssertions) {
  const ExampleReport r = run_counterexample("lp-disjoint-support", {});
  const std::string csv = report_csv(to_json(r));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,assertion,value,tolerance,pass");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.assertions.size() + 1);
}
