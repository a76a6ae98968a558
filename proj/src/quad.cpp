#include "qtrace/quad.hpp"

#include <cmath>
#include <sstream>

namespace qtrace {

namespace {

struct SelftestValues {
  cdouble gauss, gauss_shifted, completed, completed_exact, line, torus;
  double doubling = 0;
};

template <class R>
SelftestValues run_selftest(double q, double xi) {
  using C = Cplx<R>;
  using std::abs;
  const QContext<R> ctx = make_context<R>(q);
  const R mu = from_double<R>(0.75);
  const auto gauss = [&](const C& l) { return gaussian_weight(ctx, l); };
  const auto completed = [&](const C& l) { return gaussian_weight(ctx, l) * qpow(ctx, C(l * mu)); };
  const auto f3 = [&](const C& l) { return qpow(ctx, C(l * R(3))); };

  LineContour line = line_contour_for(ctx, gauss, xi, R(1));
  LineContour at0 = line_contour_for(ctx, gauss, 0.0, R(1));
  LineContour lc = line_contour_for(ctx, completed, xi, R(1));
  LineContour l3 = line_contour_for(ctx, [&](const C& l) { return f3(l) * gauss(l); }, xi, R(1));

  SelftestValues v;
  v.gauss = to_cdouble(integrate_gaussian_line(ctx, gauss, at0));
  v.gauss_shifted = to_cdouble(integrate_gaussian_line(ctx, gauss, line));
  v.completed = to_cdouble(integrate_gaussian_line(ctx, completed, lc));
  v.completed_exact = to_cdouble(C(qpow(ctx, R(mu * mu / 2))));
  v.line = to_cdouble(integrate_gaussian_line(ctx, [&](const C& l) { return f3(l) * gauss(l); }, l3));
  const auto theta_side = [&](const C& l) { return f3(l) * theta_gamma(ctx, l).value; };
  const C t1 = integrate_torus(ctx, theta_side, TorusContour{xi, 128});
  const C t2 = integrate_torus(ctx, theta_side, TorusContour{xi, 256});
  v.torus = to_cdouble(t2);
  v.doubling = to_double(R(abs(t2 - t1) / abs(t2)));
  LineContour l3d = l3;
  l3d.n_points *= 2;
  const C d2 = integrate_gaussian_line(ctx, [&](const C& l) { return f3(l) * gauss(l); }, l3d);
  v.doubling = std::max(v.doubling, std::abs(to_cdouble(d2) - v.line) / std::abs(v.line));
  return v;
}

}  // namespace

CheckReport normalization_selftest(double q, double xi) {
  Stopwatch sw;
  // q^{-lambda^2/2} reaches q^{-xi^2/2} on C_xi, so the digits grow with xi.
  const double log10_peak = xi * xi / 2 * std::abs(std::log10(q));
  const PrecisionPlan plan = plan_precision(log10_peak, -14, PrecisionMode::extended);
  const SelftestValues v = with_precision(plan, [&]<class R>() { return run_selftest<R>(q, xi); });

  CheckReport r;
  r.name = "quad.normalization_selftest";
  r.params = {{"q", q}, {"xi", xi}};
  r.tolerance = 1e-10;
  ErrorTracker t;
  t.add(v.gauss, 1.0);
  t.add(v.gauss_shifted, 1.0);
  t.add(v.completed, v.completed_exact);
  t.add(v.line, v.torus);
  t.fill(r);
  r.node_doubling_delta = v.doubling;
  r.digits = plan.extended ? plan.digits : 0;
  std::ostringstream os;
  os.precision(17);
  os << "c0 = sqrt(L/2pi); gaussian(0) = " << v.gauss.real() << ", gaussian(xi) = " << v.gauss_shifted.real()
     << ", theta lemma q^{3 lambda}: line " << v.line.real() << " torus " << v.torus.real();
  r.add_note(os.str());
  r.runtime_ms = sw.ms();
  return r;
}

}  // namespace qtrace
