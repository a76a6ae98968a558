#include "qtrace/suites.hpp"
#include "qtrace/verify.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

using namespace qtrace;

namespace {

void expect_pass(const CheckReport& r) {
  EXPECT_TRUE(r.passed) << r.name << " abs=" << r.abs_err << " rel=" << r.rel_err << " " << r.notes;
  EXPECT_EQ(r.passed, r.abs_err <= r.tolerance || r.rel_err <= r.tolerance);
}

void expect_pass(const std::vector<CheckReport>& rs) {
  ASSERT_FALSE(rs.empty());
  for (const auto& r : rs) expect_pass(r);
}

const CheckReport& by_name(const std::vector<CheckReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.name == name) return r;
  throw std::runtime_error("missing report " + name);
}

}  // namespace

TEST(Reports, ErrorTrackerKeepsWorstSample) {
  ErrorTracker t;
  t.add(1.0, 1.0);
  t.add(2.1, 2.0);
  t.add(0.5, 0.4, 10.0);
  CheckReport r;
  r.tolerance = 0.06;
  t.fill(r);
  EXPECT_EQ(t.count(), 3);
  EXPECT_NEAR(r.abs_err, 0.1, 1e-12);
  EXPECT_NEAR(r.rel_err, 0.05, 1e-12);
  EXPECT_TRUE(r.passed);
}

TEST(Reports, JsonCarriesEveryField) {
  CheckReport r = make_report("x", {{"q", 0.5}}, cdouble(1, 2), cdouble(1, 2.5), 1e-3);
  r.add_note("a");
  r.add_note("b");
  const auto doc = nlohmann::json::parse(reports_to_json({r}));
  const auto& j = doc["reports"][0];
  for (const char* key : {"name", "params", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "rel_err",
                          "tolerance", "passed", "runtime_ms", "notes"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["notes"], "a; b");
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(doc["summary"]["total"], 1);
  const std::string csv = reports_to_csv({r});
  EXPECT_EQ(csv.rfind("name,params,lhs_re", 0), 0u);
}

TEST(Verify, OracleGate) {
  for (int m = 0; m <= 3; ++m) expect_pass(check_oracle_consistency(0.5, m));
}

TEST(Verify, Symmetry) { expect_pass(check_symmetry(0.5, 2)); }

TEST(Verify, OrthogonalityExamples) {
  // m = 0 diagonal is pure Fourier orthogonality
  const CheckReport r0 = check_orthogonality(0.5, 0, 0.4, 0.4, 7);
  expect_pass(r0);
  EXPECT_NEAR(std::abs(r0.lhs - 1.0), 0.0, 1e-12);
  const CheckReport off = check_orthogonality(0.5, 1, 0.3, 2.3, 8);
  expect_pass(off);
  EXPECT_LT(std::abs(off.lhs), 1e-9);
  const CheckReport diag = check_orthogonality(0.5, 2, 0.4, 0.4, 9);
  expect_pass(diag);
  EXPECT_NEAR(diag.rhs.real(), 0.0777090913569634, 1e-15);
  EXPECT_THROW(check_orthogonality(0.5, 1, 0.3, 0.8, 8), std::invalid_argument);
}

TEST(Verify, HeatExamples) {
  const CheckReport r0 = check_heat(0.5, 0, 0.7, -0.2, 7);
  expect_pass(r0);
  // q^{(mu^2 + nu^2)/2} q^{-mu nu}
  EXPECT_NEAR(std::abs(r0.rhs - std::pow(0.5, (0.49 + 0.04) / 2 + 0.14)), 0.0, 1e-14);
  expect_pass(check_heat(0.5, 1, 0.7, -0.2, 8));
}

TEST(Verify, HeatCancellationWitness) {
  const CheckReport r = check_heat_cancellation(0.5, 2, 0.7, -0.2, 9);
  expect_pass(r);
  EXPECT_GT(r.params.at("witness_gap"), 1e-3);
}

TEST(Verify, FiniteDimensional) {
  const auto o = check_orthogonality_findim(0.5, 1, 8, 8, 8);
  expect_pass(o);
  expect_pass(check_orthogonality_findim(0.5, 1, 8, 10, 8));
  expect_pass(check_orthogonality_findim(0.5, 0, 5, 5, 7));
  const auto h = check_heat_findim(0.5, 1, 8, 9, 8);
  expect_pass(h);
  EXPECT_NEAR(by_name(h, "findim.heat_psi").rhs.real(), 11.313708498367363, 1e-12);
}

TEST(Verify, ThetaAndKostant) {
  expect_pass(check_theta_lemma(0.5));
  expect_pass(check_kostant(0.5, {{0.3, 0.2}, {-0.7, 0.5}}));
  expect_pass(check_kostant(0.1, {{0.3, 0.2}}));
}

TEST(Verify, WeylAndCocycle) {
  expect_pass(check_weyl_character_formula(0.5, 1, -9, {{0.3, 0.2}, {-0.4, 0.7}}));
  expect_pass(check_weyl_character_formula(0.5, 0, -6, {{0.3, 0.2}}));
  expect_pass(check_dynamical_weyl_cocycle(0.5, 2, 7, 12));
}

TEST(Verify, ResiduesResonanceAndMacdonald) {
  expect_pass(check_residues_and_chambers(0.5, 1, 0.7, -0.2, 8));
  expect_pass(check_residues_and_chambers(0.5, 0, 0.7, -0.2, 7));
  for (int m = 0; m <= 3; ++m) expect_pass(check_resonance(0.5, m));
  expect_pass(check_mr_eigen_and_selfadjoint(0.5, 1));
}

TEST(Verify, TransformsForTrivialV) { expect_pass(check_transform_roundtrip(0.5, 0)); }

TEST(Suites, RegistryAndErrorHandling) {
  EXPECT_NE(find_suite("orthogonality"), nullptr);
  EXPECT_EQ(find_suite("nope"), nullptr);
  SuiteParams p;
  p.m = 1;
  p.tolerances["symmetry"] = 1e-3;
  EXPECT_EQ(p.tol("symmetry", 1), 1e-3);
  EXPECT_EQ(p.tol("heat", 2), 2);
  EXPECT_EQ(p.xi_value(), 8);
  EXPECT_TRUE(run_suite(*find_suite("heat_cancellation"), p).empty());
  // argument errors propagate, library errors become failed reports
  p.mu = 0.3;
  p.nu = 0.9;
  EXPECT_THROW(run_suite(*find_suite("orthogonality"), p), std::invalid_argument);
  p.mu = 1.0;  // on a mu-pole of F for m = 1
  p.nu = -0.2;
  const auto r = run_suite(*find_suite("heat"), p);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_FALSE(r[0].passed);
  EXPECT_NE(r[0].notes.find("error"), std::string::npos);
}
