#include "qtrace/verify.hpp"

#include "verify_common.hpp"

#include <cmath>

namespace qtrace {

using detail::PointSampler;

namespace {

struct QuadResult {
  cdouble value, doubled, rhs;
};

// One report from a quadrature value, its node-doubled twin and the rhs.
CheckReport quad_report(std::string name, std::map<std::string, double> params, const QuadResult& v,
                        double tol, bool relative) {
  const double scale = relative ? std::abs(v.rhs) : 1.0;
  CheckReport r = make_report(std::move(name), std::move(params), v.value, v.rhs, tol,
                              relative ? -1 : 1.0);
  r.node_doubling_delta = detail::rel_delta(v.value, v.doubled, scale);
  return r;
}

std::map<std::string, double> findim_params(double q, int m, int mu, int nu, double xi) {
  return {{"q", q}, {"m", double(m)}, {"mu", double(mu)}, {"nu", double(nu)}, {"xi", xi}};
}

// F^{V*}_{-b-1}(-lambda) F^V_{-a-1}(lambda) / 2 and the same in Psi-form with
// delta(lambda) delta(-lambda); `heat` multiplies by q^{-lambda^2/2}.
template <class R>
auto findim_integrand(const TraceFunctionParams<R>& p, int a, int b, bool psi_form, bool heat) {
  using C = Cplx<R>;
  FindimTrace<R> fa(p, -a - 1);
  FindimTrace<R> fb(p, -b - 1, DualFlag::right_dual);
  return [p, fa, fb, psi_form, heat](const C& l) {
    C v = psi_form ? C(weyl_denominator(p.ctx, l) * weyl_denominator(p.ctx, C(-l)) * fa.psi(l) *
                       fb.psi(C(-l)))
                   : C(fb(C(-l)) * fa(l));
    if (heat) v *= gaussian_weight(p.ctx, l);
    return C(v / R(2));
  };
}

}  // namespace

std::vector<CheckReport> check_orthogonality_findim(double q, int m, int mu, int nu, double xi,
                                                    const QuadratureOptions& opt, double tol) {
  std::vector<CheckReport> out;
  for (const bool psi_form : {false, true}) {
    Stopwatch sw;
    const auto make = [&]<class R>() {
      const auto p = make_params<R>(q, m);
      Cplx<R> rhs(0);
      if (mu == nu)
        rhs = psi_form ? Q_closed(p, Cplx<R>(R(mu))) : Q_closed_inv(p, Cplx<R>(R(-mu - 1)));
      return std::pair{findim_integrand(p, mu, nu, psi_form, false), rhs};
    };
    const detail::Probe pr = detail::probe_contour(q, xi, make);
    const double target = std::log10(tol) + (mu == nu ? pr.log10_scale : 0.0);
    const PrecisionPlan plan = plan_precision(pr.log10_peak, target, opt.mode);
    const QuadResult v = with_precision(plan, [&]<class R>() {
      const QContext<R> ctx = make_context<R>(q);
      auto [f, rhs] = make.template operator()<R>();
      const auto a = integrate_torus(ctx, f, TorusContour{xi, opt.torus_n});
      const auto b = integrate_torus(ctx, f, TorusContour{xi, 2 * opt.torus_n});
      return QuadResult{to_cdouble(a), to_cdouble(b), to_cdouble(rhs)};
    });
    CheckReport r = quad_report(psi_form ? "findim.orthogonality_psi" : "findim.orthogonality",
                                findim_params(q, m, mu, nu, xi), v, tol, mu == nu);
    if (psi_form && mu != nu) {
      // Off the diagonal the Psi-form is measured against the diagonal norms
      // sqrt(|Q(mu) Q(nu)|), which grow like q^{-2m(m+1)}.
      const auto pd = make_params<double>(q, m);
      const double norm = std::sqrt(std::abs(Q_closed(pd, cdouble(mu)) * Q_closed(pd, cdouble(nu))));
      r.rel_err = r.abs_err / norm;
      r.decide();
      r.node_doubling_delta /= norm;
      r.add_note("off-diagonal error relative to sqrt(|Q(mu) Q(nu)|) = " + detail::fmt(norm));
    }
    r.params["torus_n"] = opt.torus_n;
    r.add_note(psi_form ? "weight delta(lambda) delta(-lambda); rhs Q(mu) on V[0]"
                        : "labels -mu-1, -nu-1; rhs Q^{-1}(-(-mu-1)-1) on V[0]");
    detail::finish(r, plan, sw);
    out.push_back(r);
  }
  return out;
}

std::vector<CheckReport> check_heat_findim(double q, int m, int mu, int nu, double xi,
                                           const QuadratureOptions& opt, double tol, double sym_tol) {
  std::vector<CheckReport> out;
  const double shift = (double(mu + 1) * (mu + 1) + double(nu + 1) * (nu + 1)) / 2;
  for (const bool psi_form : {false, true}) {
    Stopwatch sw;
    const auto make = [&]<class R>() {
      using C = Cplx<R>;
      const auto p = make_params<R>(q, m);
      const C at(R(-mu - 1));
      const R g = qpow(p.ctx, from_double<R>(shift));
      C rhs;
      if (psi_form) {
        rhs = weyl_denominator(p.ctx, at) * g * Q_closed(p, C(R(mu))) *
              FindimTrace<R>(p, -nu - 1, DualFlag::right_dual).psi(at);
      } else {
        rhs = g * FindimTrace<R>(p, -nu - 1, DualFlag::right_dual)(at);
      }
      return std::pair{findim_integrand(p, mu, nu, psi_form, true), rhs};
    };
    const detail::Probe pr = detail::probe_contour(q, xi, make);
    const PrecisionPlan plan =
        plan_precision(pr.log10_peak, std::log10(tol) + pr.log10_scale, opt.mode);
    struct Res {
      QuadResult v;
      cdouble laurent;
    };
    const Res res = with_precision(plan, [&]<class R>() {
      using C = Cplx<R>;
      const QContext<R> ctx = make_context<R>(q);
      auto [f, rhs] = make.template operator()<R>();
      const LineContour lc =
          line_contour_for(ctx, f, xi, R(abs(rhs)), opt.tail_budget, opt.line_n);
      LineContour lc2 = lc;
      lc2.n_points *= 2;
      const C a = integrate_gaussian_line(ctx, f, lc);
      const C b = integrate_gaussian_line(ctx, f, lc2);
      C laurent(0);
      if (psi_form) {
        // (1/2) sum_c A_c q^{c^2/2} with A the Laurent coefficients of the integrand
        const auto p = make_params<R>(q, m);
        const auto la = FindimTrace<R>(p, -mu - 1).laurent();
        const auto lb = FindimTrace<R>(p, -nu - 1, DualFlag::right_dual).laurent();
        const std::map<int, R> dd{{2, R(-1)}, {0, R(2)}, {-2, R(-1)}};
        std::map<int, C> prod;
        for (const auto& [ea, ca] : la)
          for (const auto& [eb, cb] : lb)
            for (const auto& [ed, cd] : dd) prod[ea - eb + ed] += ca * cb * cd;
        for (const auto& [e, cf] : prod) laurent += cf * qpow(ctx, R(e) * R(e) / 2);
        laurent /= R(2);
      }
      return Res{{to_cdouble(a), to_cdouble(b), to_cdouble(rhs)}, to_cdouble(laurent)};
    });
    CheckReport r = quad_report(psi_form ? "findim.heat_psi" : "findim.heat",
                                findim_params(q, m, mu, nu, xi), res.v, tol, true);
    r.params["line_n"] = opt.line_n;
    detail::finish(r, plan, sw);
    out.push_back(r);
    if (psi_form) {
      CheckReport l = make_report("findim.heat_laurent", findim_params(q, m, mu, nu, xi), res.laurent,
                                  res.v.rhs, sym_tol);
      l.add_note("Laurent expansion integrated term by term against the Gaussian");
      detail::finish(l, plan, sw);
      out.push_back(l);
    }
  }

  // F^{V*}_{-nu-1}(-mu-1) = F^V_{-mu-1}(-nu-1)
  {
    Stopwatch sw;
    PrecisionPlan plan;
    plan.extended = true;
    plan.digits = 50;
    const auto [lhs, rhs] = with_precision(plan, [&]<class R>() {
      const auto p = make_params<R>(q, m);
      const Cplx<R> s = FindimTrace<R>(p, -nu - 1, DualFlag::right_dual)(Cplx<R>(R(-mu - 1)));
      const Cplx<R> t = FindimTrace<R>(p, -mu - 1)(Cplx<R>(R(-nu - 1)));
      return std::pair{to_cdouble(s), to_cdouble(t)};
    });
    CheckReport r = make_report("findim.corollary_symmetry", findim_params(q, m, mu, nu, xi), lhs, rhs,
                                sym_tol);
    detail::finish(r, plan, sw);
    out.push_back(r);
  }
  return out;
}

std::vector<CheckReport> check_weyl_character_formula(double q, int m, int mu,
                                                      const std::vector<cdouble>& lambdas,
                                                      double tol) {
  const Context c = make_context<double>(q);
  const auto p = make_params<double>(q, m);
  const int n = -mu - 1;
  std::vector<CheckReport> out;
  const std::map<std::string, double> params{{"q", q}, {"m", double(m)}, {"mu", double(mu)}};
  {
    Stopwatch sw;
    CheckReport r;
    r.name = "weyl.character_formula";
    r.params = params;
    r.tolerance = tol;
    const FindimTrace<double> f(p, mu);
    // ordinary action s mu = -mu on the second argument
    const cdouble a = dynamical_weyl(c, m, n, DualFlag::right_dual);
    ErrorTracker t;
    for (const cdouble& l : lambdas) t.add(f(l), F_closed(p, l, cdouble(mu)) - F_closed(p, l, cdouble(-mu)) / a);
    t.fill(r);
    r.add_note("F_mu = F(., mu) - F(., -mu) A_{s,V*}(-mu-1)^{-1}");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  {
    Stopwatch sw;
    CheckReport r;
    r.name = "weyl.character_formula_psi";
    r.params = params;
    r.tolerance = tol;
    const FindimTrace<double> f(p, mu);
    // dot action s.n = -n - 2
    const cdouble a = dynamical_weyl(c, m, n);
    ErrorTracker t;
    for (const cdouble& l : lambdas)
      t.add(f.psi(l), Psi_closed(p, l, cdouble(n)) - Psi_closed(p, l, cdouble(-n - 2)) * a);
    t.fill(r);
    r.add_note("Psi_n = Psi(., n) - Psi(., -n-2) A_s(n)");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  {
    Stopwatch sw;
    CheckReport r;
    r.name = "weyl.symmetry";
    r.params = {{"q", q}, {"m", double(m)}};
    r.tolerance = tol;
    ErrorTracker t;
    for (const auto& [l, u] : {std::pair{m + 8, m + 10}, {m + 6, m + 9}, {m + 12, m + 7}}) {
      const cdouble lhs = F_closed(p, cdouble(l), cdouble(u));
      const cdouble rhs = dynamical_weyl(c, m, l - 1) * F_closed(p, cdouble(-l), cdouble(-u)) *
                          dynamical_weyl(c, m, u - 1, DualFlag::right_dual);
      t.add(lhs, rhs);
    }
    t.fill(r);
    r.add_note("F(l, u) = A_s(l-1) F(-l, -u) A_{s,V*}(u-1) at integral points");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  return out;
}

CheckReport check_dynamical_weyl_cocycle(double q, int m, int mu_from, int mu_to, double tol) {
  Stopwatch sw;
  const Context c = make_context<double>(q);
  const auto p = make_params<double>(q, m);
  CheckReport r;
  r.name = "weyl.cocycle";
  r.params = {{"q", q}, {"m", double(m)}, {"mu_from", double(mu_from)}, {"mu_to", double(mu_to)}};
  r.tolerance = tol;
  ErrorTracker t;
  for (int mu = mu_from; mu <= mu_to; ++mu) {
    const cdouble a = dynamical_weyl(c, m, mu);
    t.add(a * dynamical_weyl_closed(p, cdouble(-mu - 2)), 1.0);
    t.add(a, dynamical_weyl_closed(p, cdouble(mu)));
    t.add(dynamical_weyl(c, m, mu, DualFlag::right_dual), dynamical_weyl_closed(p, cdouble(mu)));
  }
  t.fill(r);
  r.add_note("A(mu) A(s.mu) = 1 with A(s.mu) from the closed form; oracle against closed form for V, V*");
  r.runtime_ms = sw.ms();
  return r;
}

}  // namespace qtrace
