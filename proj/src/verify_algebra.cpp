#include "qtrace/verify.hpp"

#include "verify_common.hpp"

namespace qtrace {

using detail::PointSampler;

std::vector<CheckReport> check_mr_eigen_and_selfadjoint(double q, int m, int samples, unsigned seed,
                                                        double tol) {
  const Context c = make_context<double>(q);
  const auto p = make_params<double>(q, m);
  PointSampler lams(seed, -2, 2, 0.2, 1);
  PointSampler nus(seed + 1, -1, 1, -0.5, 0.5);
  const std::map<std::string, double> params{{"q", q}, {"m", double(m)}, {"samples", double(samples)}};
  std::vector<CheckReport> out;
  {
    Stopwatch sw;
    CheckReport r;
    r.name = "mr.eigen";
    r.params = params;
    r.tolerance = tol;
    ErrorTracker t;
    for (int i = 0; i < samples; ++i) {
      const cdouble l = lams(), nu = nus(-m - 1, m + 1);
      const MRCoefficients a = mr_operator_coeffs(c, m, l);
      cdouble d = 0;
      for (int s : {2, 0, -2}) d += a.at(s) * F_closed(p, l + double(s), nu);
      const cdouble chi = qpow(c, -2.0 * nu) + 1.0 + qpow(c, 2.0 * nu);
      t.add(d, chi * F_closed(p, l, nu));
    }
    t.fill(r);
    r.add_note("U = L_2; lhs sum_s a_s(lambda) F(lambda + s, nu), rhs chi_U(q^{-2 nu}) F(lambda, nu)");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  {
    Stopwatch sw;
    CheckReport r;
    r.name = "mr.selfadjoint";
    r.params = params;
    r.tolerance = tol;
    ErrorTracker t;
    for (int i = 0; i < samples; ++i) {
      const cdouble l = lams();
      const MRCoefficients dual = mr_operator_coeffs(c, m, l, DualFlag::right_dual);
      for (int s : {2, 0, -2}) {
        const cdouble a = mr_operator_coeffs(c, m, -l - double(s)).at(s);
        t.add(a, dual.at(s));
      }
    }
    t.fill(r);
    r.add_note("a^V_s(-lambda - s) = a^{V*}_s(lambda), s in {2, 0, -2}");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  return out;
}

}  // namespace qtrace
