// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "qtrace/quad.hpp"
#include "qtrace/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace qtrace;

namespace {

using Reports = std::vector<CheckReport>;

// Reports whose quadrature doubling delta feeds the hygiene criterion.
Reports g_integrals;

struct Outcome {
  bool passed = true;
  std::string detail;
  int reports = 0;
  double worst = 0;  // worst min(abs_err, rel_err) / tolerance
  std::string worst_name;

  void add(const CheckReport& r, bool integral = false) {
    ++reports;
    const double e = std::min(r.abs_err, r.rel_err) / r.tolerance;
    if (worst_name.empty() || e > worst) {
      worst = e;
      worst_name = r.name;
    }
    if (!r.passed) {
      passed = false;
      note(r.name + " failed (abs " + fmt(r.abs_err) + ", rel " + fmt(r.rel_err) + ", tol " +
           fmt(r.tolerance) + ")");
    }
    if (integral) g_integrals.push_back(r);
  }
  void add(const Reports& rs, bool integral = false) {
    for (const auto& r : rs) add(r, integral);
  }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      note(what);
    }
  }
  void note(const std::string& s) { detail += detail.empty() ? s : "; " + s; }

  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
  }
};

// Worst |value(xi) - value(m+7)| / max(1, |value(m+7)|) over the given offsets.
template <class Fn>
double xi_spread(int m, const std::vector<int>& offsets, Fn&& value_at) {
  const cdouble base = value_at(m + 7.0);
  double worst = 0;
  for (const int d : offsets)
    worst = std::max(worst, std::abs(value_at(double(m + d)) - base) / std::max(1.0, std::abs(base)));
  return worst;
}

const std::vector<int> kFullScan{5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
const std::vector<int> kCoarseScan{5, 7, 10, 15};

Outcome convention_gate() {
  Outcome o;
  for (int m = 1; m <= 3; ++m) o.add(check_oracle_consistency(0.5, m, 1, 200));
  return o;
}

Outcome orthogonality() {
  Outcome o;
  QuadratureOptions opt;
  opt.torus_n = 256;
  for (const double q : {0.3, 0.5, 0.7})
    for (int m = 1; m <= 3; ++m) {
      const double xi = m + 7;
      for (int d = 1; d <= 3; ++d) o.add(check_orthogonality(q, m, 0.3, 0.3 + d, xi, opt, 1e-9), true);
      o.add(check_orthogonality(q, m, 0.4, 0.4, xi, opt, 1e-9), true);
      for (const double nu : {0.4, 1.4}) {
        const double s =
            xi_spread(m, kFullScan, [&](double x) { return check_orthogonality(q, m, 0.4, nu, x, opt).lhs; });
        o.require(s <= 1e-8, "xi-scan spread " + Outcome::fmt(s) + " at q=" + Outcome::fmt(q) +
                                 " m=" + std::to_string(m));
      }
    }
  return o;
}

Outcome heat() {
  Outcome o;
  QuadratureOptions opt;
  opt.line_n = 2048;
  opt.tail_budget = 1e-12;
  for (const double q : {0.3, 0.5, 0.7})
    for (int m = 1; m <= 3; ++m) {
      const double xi = m + 7;
      o.add(check_heat(q, m, 0.7, -0.2, xi, opt, 1e-7), true);
      o.add(check_heat(q, m, 0.3, 0.55, xi, opt, 1e-7), true);
      const double s =
          xi_spread(m, kCoarseScan, [&](double x) { return check_heat(q, m, 0.7, -0.2, x, opt).lhs; });
      o.require(s <= 1e-8, "xi-scan spread " + Outcome::fmt(s) + " at q=" + Outcome::fmt(q) +
                               " m=" + std::to_string(m));
    }
  const CheckReport w = check_heat_cancellation(0.5, 2, 0.7, -0.2, 9, opt, 1e-7, 1e-3);
  o.add(w, true);
  const auto it = w.params.find("witness_gap");
  o.require(it != w.params.end() && it->second > 1e-3, "no summand pair stays 1e-3 away from the monomials");
  return o;
}

Outcome findim_orthogonality() {
  Outcome o;
  for (int a = 8; a <= 10; ++a)
    for (int b = 8; b <= 10; ++b) o.add(check_orthogonality_findim(0.5, 1, a, b, 8, {}, 1e-9), true);
  // m = 0: Weyl character orthogonality to quadrature precision
  for (int a = 5; a <= 7; ++a)
    for (int b = 5; b <= 7; ++b) o.add(check_orthogonality_findim(0.5, 0, a, b, 7, {}, 1e-13), true);
  return o;
}

Outcome findim_heat() {
  Outcome o;
  o.add(check_heat_findim(0.5, 1, 8, 9, 8, {}, 1e-7, 1e-9), true);
  o.add(check_heat_findim(0.5, 1, 9, 8, 8, {}, 1e-7, 1e-9), true);
  return o;
}

Outcome resonance() {
  Outcome o;
  for (int m = 0; m <= 3; ++m) o.add(check_resonance(0.5, m, 20, 4, 1e-10));
  return o;
}

Outcome residues_and_chambers() {
  Outcome o;
  for (int m = 1; m <= 3; ++m) o.add(check_residues_and_chambers(0.5, m, 0.7, -0.2, m + 7, {}, 1e-8, 1e-8), true);
  return o;
}

Outcome theta_and_kostant() {
  Outcome o;
  o.add(check_theta_lemma(0.5, 10, 0, 3, 1e-9));
  o.add(check_kostant(0.5, {{0.3, 0.2}, {-0.7, 0.5}, {1.1, -0.3}, {0.05, 1.3}, {-1.6, -0.8}}, 60, 1e-9));
  return o;
}

Outcome dynamical_weyl() {
  Outcome o;
  for (int m = 1; m <= 3; ++m) o.add(check_dynamical_weyl_cocycle(0.5, m, m + 5, m + 15, 1e-9));
  std::vector<cdouble> lambdas;
  for (int k = 0; k < 10; ++k) lambdas.emplace_back(-1.3 + 0.27 * k, 0.9 - 0.17 * k);
  o.add(check_weyl_character_formula(0.5, 1, -9, lambdas, 1e-8));
  return o;
}

Outcome macdonald() {
  Outcome o;
  for (int m = 0; m <= 3; ++m) o.add(check_mr_eigen_and_selfadjoint(0.5, m, 10, 5, 1e-8));
  return o;
}

Outcome transforms() {
  Outcome o;
  o.add(check_transform_roundtrip(0.5, 1, {}, 1e-5, 1e-6), true);
  return o;
}

Outcome hygiene() {
  Outcome o;
  o.add(normalization_selftest(0.5, 0));
  o.add(normalization_selftest(0.5, 7));
  double worst = 0;
  std::string where;
  int counted = 0;
  for (const auto& r : g_integrals) {
    if (std::isnan(r.node_doubling_delta)) continue;
    ++counted;
    if (r.node_doubling_delta >= worst) {
      worst = r.node_doubling_delta;
      where = r.name;
    }
  }
  o.require(worst < 1e-10, "node doubling moved " + where + " by " + Outcome::fmt(worst));
  o.note(std::to_string(counted) + " integrals, worst doubling delta " + Outcome::fmt(worst) +
         (where.empty() ? "" : " (" + where + ")"));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"convention gate", convention_gate},
      {"orthogonality", orthogonality},
      {"heat identity", heat},
      {"finite-dimensional orthogonality", findim_orthogonality},
      {"finite-dimensional heat", findim_heat},
      {"resonance", resonance},
      {"residues and chambers", residues_and_chambers},
      {"theta lemma and Kostant identity", theta_and_kostant},
      {"dynamical Weyl group", dynamical_weyl},
      {"Macdonald-Ruijsenaars operators", macdonald},
      {"transforms", transforms},
      {"quadrature hygiene", hygiene},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Stopwatch sw;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.note(std::string("error: ") + e.what());
    }
    if (!o.passed) ++failed;
    std::printf("%s %2zu %-34s %3d reports, worst err/tol %s (%s), %.1f s%s%s\n",
                o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.reports,
                Outcome::fmt(o.worst).c_str(), o.worst_name.c_str(), sw.ms() / 1000,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
