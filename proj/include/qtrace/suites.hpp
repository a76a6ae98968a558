#pragma once

#include "qtrace/report.hpp"
#include "qtrace/verify.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtrace {

// Parameters for one suite run; unset weights fall back to per-suite defaults.
struct SuiteParams {
  double q = 0.5;
  int m = 1;
  std::optional<double> mu, nu, xi, eta;
  QuadratureOptions quad;
  TransformOptions transform;
  int theta_B = 60;
  int verma_K = 200;
  std::map<std::string, double> tolerances;  // suite name -> tolerance override

  double xi_value() const { return xi ? *xi : m + 7.0; }
  double tol(const std::string& suite, double fallback) const;
};

struct Suite {
  std::string name;
  std::string description;
  std::function<std::vector<CheckReport>(const SuiteParams&)> run;
};

const std::vector<Suite>& suite_registry();
const Suite* find_suite(const std::string& name);

// Runs a suite, turning library errors into failed reports.
std::vector<CheckReport> run_suite(const Suite& s, const SuiteParams& p);

// Normalization self-tests at xi = 0 and xi = 7 plus the oracle gate.
std::vector<CheckReport> run_selftest(double q, int m);

}  // namespace qtrace
