#include "qtrace/verify.hpp"

#include "verify_common.hpp"

#include <cmath>

namespace qtrace {

namespace {

// Trapezoid sum of samples on a uniform grid, using every `stride`-th node.
cdouble trap(const std::vector<cdouble>& v, double h, int stride) {
  std::vector<cdouble> w;
  for (std::size_t k = 0; k < v.size(); k += stride) w.push_back(v[k]);
  w.front() /= 2.0;
  w.back() /= 2.0;
  return pairwise_sum(w) * (h * stride);
}

std::vector<double> grid(double half, int panels) {
  std::vector<double> g(panels + 1);
  for (int k = 0; k <= panels; ++k) g[k] = -half + 2 * half * k / panels;
  return g;
}

struct Roundtrip {
  double sup_err = 0, sup_ref = 0, halving = 0;
  cdouble worst_lhs, worst_rhs;
};

}  // namespace

std::vector<CheckReport> check_transform_roundtrip(double q, int m, const TransformOptions& o_in,
                                                   double tol, double realint_tol) {
  const Context c = make_context<double>(q);
  const auto p = make_params<double>(q, m);
  TransformOptions o = o_in;
  if (std::isnan(o.xi)) o.xi = m + 7;
  // D_eta halfway between the pole lines of 1/Q^{-1}, capped so the e^{eta^2/2}
  // dynamic range of the nested integrands stays inside binary64.
  if (std::isnan(o.eta)) o.eta = std::min(pi_v<double>() / (2 * c.L), 2.5);
  // Transformed test functions decay in L y, so the C_xi grid scales with 1 / L.
  const double s = c.L / std::log(2.0);
  if (std::isnan(o.y_max)) o.y_max = 40 / s;
  // For m > 0 the D_eta tails of K_Im f decay only like q^{|x|}.
  if (std::isnan(o.x_max)) o.x_max = std::max(14.0, 2.5 / c.L);
  if (o.real_n <= 0) o.real_n = int(std::ceil(o.x_max / 0.01));
  const double xi = o.xi, eta = o.eta, c0 = measure_constant(c);
  const std::map<std::string, double> params{{"q", q}, {"m", double(m)}, {"xi", xi}, {"eta", eta}, {"x_max", o.x_max}, {"y_max", o.y_max}};
  const cdouble ii(0, 1);

  const auto xs = grid(o.x_max, o.real_n);
  const auto ys = grid(o.y_max, o.line_n);
  const double hx = 2 * o.x_max / o.real_n, hy = 2 * o.y_max / o.line_n;
  const auto on_d = [&](double x) { return cdouble(x, eta); };
  const auto on_c = [&](double y) { return cdouble(xi, y); };

  // K_Re g(lambda) = int_{D_eta} F(lambda, mu) g(mu) / Q^{-1}(mu) dmu
  const auto k_re = [&](const auto& g, cdouble l) {
    std::vector<cdouble> v(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const cdouble mu = on_d(xs[k]);
      v[k] = F_closed(p, l, mu) * g(mu) / Q_closed_inv(p, mu);
    }
    return c0 * trap(v, hx, 1);
  };
  // K_Im f(mu) = int_{C_xi} F(mu, -lambda) f(lambda) dlambda
  const auto k_im = [&](const auto& f, cdouble mu) {
    std::vector<cdouble> v(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const cdouble l = on_c(ys[k]);
      v[k] = F_closed(p, mu, -l) * f(l);
    }
    return c0 * trap(v, hy, 1);
  };

  const auto sample_points = [&](bool real_cycle) {
    std::vector<cdouble> pts;
    for (int k = 0; k < o.grid; ++k) {
      const double t = -3 + 6.0 * k / std::max(1, o.grid - 1);
      pts.push_back(real_cycle ? on_d(t) : on_c(t / s));
    }
    return pts;
  };

  std::vector<CheckReport> out;

  // g on D_eta, K_Im K_Re g = g
  {
    Stopwatch sw;
    const auto g = [&](cdouble mu) {
      const cdouble z = mu - ii * eta - 0.5;
      return qpow(c, xi * mu) * std::exp(-z * z / 2.0);
    };
    std::vector<cdouble> outer(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) outer[k] = k_re(g, on_c(ys[k]));
    Roundtrip rt;
    for (const cdouble& mu : sample_points(true)) {
      std::vector<cdouble> v(ys.size());
      for (std::size_t k = 0; k < ys.size(); ++k) v[k] = F_closed(p, mu, -on_c(ys[k])) * outer[k];
      const cdouble full = c0 * trap(v, hy, 1), half = c0 * trap(v, hy, 2);
      const cdouble ref = g(mu);
      rt.sup_ref = std::max(rt.sup_ref, std::abs(ref));
      rt.halving = std::max(rt.halving, std::abs(full - half));
      if (std::abs(full - ref) >= rt.sup_err) {
        rt.sup_err = std::abs(full - ref);
        rt.worst_lhs = full;
        rt.worst_rhs = ref;
      }
    }
    CheckReport r;
    r.name = "transform.im_re";
    r.params = params;
    r.params["grid"] = o.grid;
    r.tolerance = tol;
    r.lhs = rt.worst_lhs;
    r.rhs = rt.worst_rhs;
    r.abs_err = rt.sup_err / rt.sup_ref;
    r.rel_err = r.abs_err;
    r.decide();
    r.node_doubling_delta = rt.halving / rt.sup_ref;
    r.add_note("sup |K_Im K_Re g - g| / sup |g| on D_eta; doubling delta from the halved outer rule");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }

  // f on C_xi, K_Re K_Im f = f
  {
    Stopwatch sw;
    const auto f = [&](cdouble l) {
      const cdouble z = s * (l - xi) - 0.5 * ii;
      return qpow(c, -ii * eta * l) * std::exp(z * z / 2.0);
    };
    std::vector<cdouble> outer(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) outer[k] = k_im(f, on_d(xs[k]));
    Roundtrip rt;
    for (const cdouble& l : sample_points(false)) {
      std::vector<cdouble> v(xs.size());
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const cdouble mu = on_d(xs[k]);
        v[k] = F_closed(p, l, mu) * outer[k] / Q_closed_inv(p, mu);
      }
      const cdouble full = c0 * trap(v, hx, 1), half = c0 * trap(v, hx, 2);
      const cdouble ref = f(l);
      rt.sup_ref = std::max(rt.sup_ref, std::abs(ref));
      rt.halving = std::max(rt.halving, std::abs(full - half));
      if (std::abs(full - ref) >= rt.sup_err) {
        rt.sup_err = std::abs(full - ref);
        rt.worst_lhs = full;
        rt.worst_rhs = ref;
      }
    }
    CheckReport r;
    r.name = "transform.re_im";
    r.params = params;
    r.params["grid"] = o.grid;
    r.tolerance = tol;
    r.lhs = rt.worst_lhs;
    r.rhs = rt.worst_rhs;
    r.abs_err = rt.sup_err / rt.sup_ref;
    r.rel_err = r.abs_err;
    r.decide();
    r.node_doubling_delta = rt.halving / rt.sup_ref;
    r.add_note("sup |K_Re K_Im f - f| / sup |f| on C_xi; doubling delta from the halved outer rule");
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }

  // int_{D_eta} F(lambda, mu) q^{mu^2/2} Q(-mu-1) F(mu, nu) dmu = q^{-(lambda^2+nu^2)/2} F(lambda, nu)
  {
    Stopwatch sw;
    const cdouble l(0.4), nu(-0.3);
    const double x_max = std::max(o.x_max, std::sqrt(2 * std::log(1e16) / c.L) + 2);
    const int n = int(std::ceil(2 * x_max / hx));
    RealContour rc{eta, x_max, n};
    const auto h = [&](cdouble mu) {
      return F_closed(p, l, mu) * qpow(c, mu * mu / 2.0) / Q_closed_inv(p, mu) * F_closed(p, mu, nu);
    };
    const cdouble a = integrate_real_line(c, h, rc);
    rc.n_points *= 2;
    const cdouble b = integrate_real_line(c, h, rc);
    const cdouble rhs = qpow(c, -(l * l + nu * nu) / 2.0) * F_closed(p, l, nu);
    CheckReport r = make_report("transform.realint", params, a, rhs, realint_tol);
    r.params["lambda"] = l.real();
    r.params["nu"] = nu.real();
    r.params["x_max"] = x_max;
    r.node_doubling_delta = std::abs(a - b) / std::abs(rhs);
    r.runtime_ms = sw.ms();
    out.push_back(r);
  }
  return out;
}

}  // namespace qtrace
