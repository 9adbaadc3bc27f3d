#include <gtest/gtest.h>

#include "cartan/json_io.hpp"
#include "cartan/presets.hpp"
#include "cartan/verify.hpp"

using namespace cartan;

namespace {

const Verdict& find(const std::vector<Verdict>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.suite == name) return v;
  throw std::runtime_error("missing verdict " + name);
}

bool has_finding(const Verdict& v, const std::string& needle) {
  for (const auto& f : v.findings)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

MatrixRep corrupted_natural() {
  std::vector<Matrix> E = natural_rep(2).table();
  E[1] = Matrix(2, 2);
  return MatrixRep(2, 2, E);
}

}  // namespace

TEST(Verify, DefaultConfigPassesEverySuite) {
  auto vs = run_all(SuiteConfig{});
  ASSERT_EQ(vs.size(), suite_names().size());
  for (const auto& v : vs) {
    EXPECT_TRUE(v.passed()) << v.suite << ": " << (v.failures.empty() ? "" : v.failures[0].got);
    EXPECT_GT(v.cases, 0u) << v.suite;
    EXPECT_FALSE(v.sampled) << v.suite;
  }
}

TEST(Verify, DefaultPresetPassesEverySuite) {
  for (const auto& v : run_all(preset("default").config))
    EXPECT_TRUE(v.passed()) << v.suite << ": " << (v.failures.empty() ? "" : v.failures[0].got);
}

TEST(Verify, TrivialRepModuleAxiom) {
  SuiteConfig c;
  c.rep = trivial_rep(2);
  c.rep_h = trivial_rep(2);
  EXPECT_TRUE(run_suite("module_axiom_S", c).passed());
  EXPECT_TRUE(run_suite("module_axiom_H", c).passed());
}

TEST(Verify, CorruptedRepFailsRepAndModuleSuitesOnly) {
  SuiteConfig c;
  c.rep = corrupted_natural();
  auto vs = run_all(c);
  const Verdict& rep = find(vs, "rep_axioms");
  EXPECT_FALSE(rep.passed());
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_NE(rep.failures[0].got.find("[E_"), std::string::npos);
  EXPECT_FALSE(find(vs, "module_axiom_S").passed());
  EXPECT_FALSE(find(vs, "module_axiom_map_S").passed());
  for (const char* pure : {"jacobi", "sn_closure", "hn_closure", "i_element_brackets", "module_axiom_H"})
    EXPECT_TRUE(find(vs, pure).passed()) << pure;
}

TEST(Verify, HamiltonianN4ReportsConventionSweep) {
  SuiteConfig c = preset("thm41-natural-m2").config;
  c.param_samples = 1;
  Verdict v = run_suite("module_axiom_H", c);
  EXPECT_FALSE(v.passed());
  ASSERT_FALSE(v.failures.empty());
  EXPECT_TRUE(has_finding(v, "convention i<j:"));
  EXPECT_TRUE(has_finding(v, "convention witt: 0 of"));
  c.convention = PairConvention::WittForm;
  EXPECT_TRUE(run_suite("module_axiom_H", c).passed());
}

TEST(Verify, HamiltonianN2PassesUnderLessThan) {
  SuiteConfig c = preset("thm41-natural-m1").config;
  EXPECT_TRUE(run_suite("module_axiom_H", c).passed());
}

TEST(Verify, QuasiAssociativityTracksC) {
  SuiteConfig c;
  c.c = 2;
  Verdict v = run_suite("quasi_assoc", c);
  EXPECT_TRUE(v.passed());
  EXPECT_TRUE(has_finding(v, "lambda=2 mu=2 lambda_m0=2 c=2"));
  EXPECT_TRUE(run_suite("module_axiom_map_S", c).passed());
  EXPECT_TRUE(run_suite("module_axiom_map_H", c).passed());
}

TEST(Verify, IElementIdentityHoldsOnlyAtCOne) {
  SuiteConfig c;
  EXPECT_TRUE(run_suite("i_element_brackets", c).passed());
  c.c = 2;
  EXPECT_FALSE(run_suite("i_element_brackets", c).passed());
}

TEST(Verify, TwoTermHamiltonianTBracketIsAFinding) {
  Verdict v = run_suite("t_operator_brackets", SuiteConfig{});
  EXPECT_TRUE(v.passed());
  EXPECT_TRUE(has_finding(v, "two-term"));
}

TEST(Verify, OddNSkipsHamiltonianSuites) {
  SuiteConfig c;
  c.n = 3;
  c.window_k = 1;
  Verdict v = run_suite("hn_closure", c);
  EXPECT_TRUE(v.passed());
  ASSERT_TRUE(v.skipped.has_value());
  EXPECT_EQ(v.cases, 0u);
}

TEST(Verify, BudgetSwitchesToSampling) {
  SuiteConfig c;
  c.case_budget = 1000;
  Verdict v = run_suite("jacobi", c);
  EXPECT_TRUE(v.sampled);
  EXPECT_EQ(v.cases, 1000u);
  EXPECT_TRUE(v.passed());
}

TEST(Verify, DeterministicForFixedSeed) {
  SuiteConfig c;
  c.seed = 7;
  c.case_budget = 5000;
  for (const char* s : {"jacobi", "module_axiom_map_S", "t_operator_brackets"}) {
    auto a = json_io::to_json(run_suite(s, c)).dump();
    auto b = json_io::to_json(run_suite(s, c)).dump();
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Verify, RejectsBadRequests) {
  EXPECT_THROW(run_suite("nope", SuiteConfig{}), PreconditionError);
  SuiteConfig c;
  c.window_k = 0;
  EXPECT_THROW(run_suite("jacobi", c), PreconditionError);
  c = SuiteConfig{};
  c.case_budget = 0;
  EXPECT_THROW(run_suite("jacobi", c), PreconditionError);
  c = SuiteConfig{};
  c.alpha = CoefVec(3);
  EXPECT_THROW(run_suite("jacobi", c), PreconditionError);
}

TEST(Verify, FailureRecordsReproducingInput) {
  SuiteConfig c;
  c.c = 2;
  Verdict v = run_suite("i_element_brackets", c);
  ASSERT_FALSE(v.failures.empty());
  const auto& in = v.failures[0].inputs;
  for (const char* k : {"u", "r", "v", "s", "b1", "b2", "b3", "b4", "c"}) EXPECT_TRUE(in.contains(k)) << k;
  EXPECT_LE(v.failures.size(), Verdict::kMaxRecorded);
  EXPECT_GE(v.failure_count, v.failures.size());
}
