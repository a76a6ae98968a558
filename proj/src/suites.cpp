#include "qtrace/suites.hpp"

#include "qtrace/quad.hpp"

#include "verify_common.hpp"

#include <cmath>
#include <stdexcept>

namespace qtrace {

double SuiteParams::tol(const std::string& suite, double fallback) const {
  const auto it = tolerances.find(suite);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

using Reports = std::vector<CheckReport>;

void append(Reports& out, Reports more) {
  for (auto& r : more) out.push_back(std::move(r));
}

std::vector<cdouble> kostant_samples() {
  return {{0.3, 0.2}, {-0.7, 0.5}, {1.1, -0.3}, {0.05, 1.3}, {-1.6, -0.8}};
}

std::vector<cdouble> weyl_samples(int m) {
  detail::PointSampler s(11, -1.5, 1.5, -1, 1);
  std::vector<cdouble> out;
  for (int i = 0; i < 10; ++i) out.push_back(s(0, m));
  return out;
}

// Integral weights only come from --mu/--nu when those are integers.
std::optional<int> integral(const std::optional<double>& v) {
  if (v && std::round(*v) == *v) return int(*v);
  return std::nullopt;
}

std::vector<Suite> build_registry() {
  std::vector<Suite> r;
  r.push_back({"oracle", "series, closed forms and Q operator agree", [](const SuiteParams& p) {
                 return check_oracle_consistency(p.q, p.m, 1, p.verma_K);
               }});
  r.push_back({"symmetry", "F(lambda, mu) = F(mu, lambda)", [](const SuiteParams& p) {
                 return Reports{check_symmetry(p.q, p.m, 200, 2, p.tol("symmetry", 1e-11))};
               }});
  r.push_back({"orthogonality", "torus orthogonality of trace functions", [](const SuiteParams& p) {
                 const double tol = p.tol("orthogonality", 1e-9);
                 if (p.mu || p.nu) {
                   const double mu = p.mu.value_or(0.3);
                   return Reports{check_orthogonality(p.q, p.m, mu, p.nu.value_or(mu), p.xi_value(),
                                                      p.quad, tol)};
                 }
                 return Reports{check_orthogonality(p.q, p.m, 0.3, 2.3, p.xi_value(), p.quad, tol),
                                check_orthogonality(p.q, p.m, 0.4, 0.4, p.xi_value(), p.quad, tol)};
               }});
  r.push_back({"heat", "Gaussian line integral identity", [](const SuiteParams& p) {
                 return Reports{check_heat(p.q, p.m, p.mu.value_or(0.7), p.nu.value_or(-0.2),
                                           p.xi_value(), p.quad, p.tol("heat", 1e-8))};
               }});
  r.push_back({"heat_cancellation", "summand-pair integrals of the heat identity (m >= 2)",
               [](const SuiteParams& p) {
                 if (p.m < 2) return Reports{};
                 return Reports{check_heat_cancellation(p.q, p.m, p.mu.value_or(0.7),
                                                        p.nu.value_or(-0.2), p.xi_value(), p.quad,
                                                        p.tol("heat_cancellation", 1e-7))};
               }});
  r.push_back({"orthogonality_findim", "finite-dimensional torus orthogonality",
               [](const SuiteParams& p) {
                 const double tol = p.tol("orthogonality_findim", 1e-9);
                 const auto mu = integral(p.mu), nu = integral(p.nu);
                 const int a = mu.value_or(p.m + 7);
                 Reports out;
                 if (mu || nu) {
                   append(out, check_orthogonality_findim(p.q, p.m, a, nu.value_or(a), p.xi_value(),
                                                          p.quad, tol));
                 } else {
                   append(out, check_orthogonality_findim(p.q, p.m, a, a, p.xi_value(), p.quad, tol));
                   append(out, check_orthogonality_findim(p.q, p.m, a, a + 2, p.xi_value(), p.quad, tol));
                 }
                 return out;
               }});
  r.push_back({"heat_findim", "finite-dimensional heat identity and symmetry",
               [](const SuiteParams& p) {
                 const int a = integral(p.mu).value_or(p.m + 7);
                 const int b = integral(p.nu).value_or(a + 1);
                 return check_heat_findim(p.q, p.m, a, b, p.xi_value(), p.quad,
                                          p.tol("heat_findim", 1e-7));
               }});
  r.push_back({"kostant", "theta function against its character expansion", [](const SuiteParams& p) {
                 return Reports{check_kostant(p.q, kostant_samples(), p.theta_B, p.tol("kostant", 1e-10))};
               }});
  r.push_back({"theta_lemma", "line integrals against torus integrals with theta", [](const SuiteParams& p) {
                 return Reports{check_theta_lemma(p.q, 10, 0, 3, p.tol("theta_lemma", 1e-9))};
               }});
  r.push_back({"weyl", "two-term Weyl expansions and dynamical Weyl symmetry", [](const SuiteParams& p) {
                 const auto given = integral(p.mu);
                 const int mu = given && *given < 0 ? *given : -(p.m + 8);
                 return check_weyl_character_formula(p.q, p.m, mu, weyl_samples(p.m), p.tol("weyl", 1e-8));
               }});
  r.push_back({"cocycle", "dynamical Weyl cocycle", [](const SuiteParams& p) {
                 return Reports{check_dynamical_weyl_cocycle(p.q, p.m, p.m + 5, p.m + 15,
                                                             p.tol("cocycle", 1e-9))};
               }});
  r.push_back({"residues_and_chambers", "residue cancellation and chamber independence",
               [](const SuiteParams& p) {
                 return check_residues_and_chambers(p.q, p.m, p.mu.value_or(0.7), p.nu.value_or(-0.2),
                                                    p.xi_value(), p.quad,
                                                    p.tol("residues_and_chambers", 1e-8),
                                                    p.tol("residues_and_chambers", 1e-8));
               }});
  r.push_back({"resonance", "resonance equalities of the renormalized trace", [](const SuiteParams& p) {
                 return Reports{check_resonance(p.q, p.m, 20, 4, p.tol("resonance", 1e-10))};
               }});
  r.push_back({"mr", "Macdonald-Ruijsenaars eigenfunctions and self-adjointness", [](const SuiteParams& p) {
                 return check_mr_eigen_and_selfadjoint(p.q, p.m, 10, 5, p.tol("mr", 1e-8));
               }});
  r.push_back({"transform", "integral transforms and the real-cycle identity", [](const SuiteParams& p) {
                 TransformOptions t = p.transform;
                 t.xi = p.xi_value();
                 if (p.eta) t.eta = *p.eta;
                 return check_transform_roundtrip(p.q, p.m, t, p.tol("transform", 1e-5),
                                                  p.tol("transform_realint", 1e-6));
               }});
  r.push_back({"normalization", "measure constants and theta lemma on test functions",
               [](const SuiteParams& p) {
                 return Reports{normalization_selftest(p.q, 0), normalization_selftest(p.q, 7)};
               }});
  return r;
}

}  // namespace

const std::vector<Suite>& suite_registry() {
  static const std::vector<Suite> reg = build_registry();
  return reg;
}

const Suite* find_suite(const std::string& name) {
  for (const auto& s : suite_registry())
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<CheckReport> run_suite(const Suite& s, const SuiteParams& p) {
  Stopwatch sw;
  try {
    return s.run(p);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    CheckReport r;
    r.name = s.name;
    r.params = {{"q", p.q}, {"m", double(p.m)}};
    r.abs_err = r.rel_err = detail::kInf;
    r.passed = false;
    r.add_note(std::string("error: ") + e.what());
    r.runtime_ms = sw.ms();
    return {r};
  }
}

std::vector<CheckReport> run_selftest(double q, int m) {
  Reports out{normalization_selftest(q, 0), normalization_selftest(q, 7)};
  append(out, check_oracle_consistency(q, m));
  return out;
}

}  // namespace qtrace
