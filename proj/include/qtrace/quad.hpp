#pragma once

#include "qtrace/qnum.hpp"
#include "qtrace/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qtrace {

// C_xi / kappa Q^vee: lambda = xi + i y, y over one period of length 2 pi / L.
struct TorusContour {
  double xi = 0;
  int n_points = 128;
};

// C_xi truncated to |y| <= y_max; n_points trapezoid panels.
struct LineContour {
  double xi = 0;
  double y_max = 12;
  int n_points = 2048;
  double tail_tolerance = std::numeric_limits<double>::infinity();
};

// D_eta = i eta + R truncated to |x| <= x_max.
struct RealContour {
  double eta = 0;
  double x_max = 12;
  int n_points = 2048;
  double tail_tolerance = std::numeric_limits<double>::infinity();
};

// Fixed-order pairwise reduction, so sums are reproducible bit for bit.
template <class T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    T s(0);
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return v.empty() ? T(0) : pairwise_sum(v, 0, v.size());
}

// c0 = c1 = sqrt(L / 2 pi): the constant with c0 * int q^{y^2/2} dy = 1.
template <class R>
R measure_constant(const QContext<R>& ctx) {
  using std::sqrt;
  return sqrt(ctx.L / (2 * pi_v<R>()));
}

template <class R, class Fn>
Cplx<R> integrate_torus(const QContext<R>& ctx, Fn&& f, const TorusContour& c) {
  if (c.n_points < 16) throw std::invalid_argument("torus contour needs >= 16 nodes");
  const R xi = from_double<R>(c.xi);
  const R step = ctx.torus_period / R(c.n_points);
  std::vector<Cplx<R>> vals(c.n_points);
  for (int k = 0; k < c.n_points; ++k) vals[k] = f(Cplx<R>(xi, step * R(k)));
  return pairwise_sum(vals) / R(c.n_points);
}

namespace detail {

// Trapezoid over [-half, half] of g(t); returns h * sum with half weights at the ends.
template <class R, class Fn>
Cplx<R> trapezoid(Fn&& g, const R& half, int n, Cplx<R>* end_a, Cplx<R>* end_b) {
  const R h = 2 * half / R(n);
  std::vector<Cplx<R>> vals(n + 1);
  for (int k = 0; k <= n; ++k) vals[k] = g(-half + h * R(k));
  *end_a = vals.front();
  *end_b = vals.back();
  vals.front() /= R(2);
  vals.back() /= R(2);
  return pairwise_sum(vals) * h;
}

}  // namespace detail

template <class R, class Fn>
Cplx<R> integrate_gaussian_line(const QContext<R>& ctx, Fn&& f, const LineContour& c) {
  using std::abs;
  const R xi = from_double<R>(c.xi);
  const R ymax = from_double<R>(c.y_max);
  Cplx<R> a, b;
  const Cplx<R> s =
      detail::trapezoid<R>([&](const R& y) { return f(Cplx<R>(xi, y)); }, ymax, c.n_points, &a, &b);
  const R c0 = measure_constant(ctx);
  // Beyond |y| = Y a Gaussian-dominated integrand is bounded by its end value
  // times int_Y^inf e^{-L(t^2 - Y^2)/2} dt <= 1 / (L Y).
  const R tail = c0 * (abs(a) + abs(b)) / (ctx.L * ymax);
  if (tail > from_double<R>(c.tail_tolerance)) throw TailTooLarge("line integral tail too large");
  return c0 * s;
}

template <class R, class Fn>
Cplx<R> integrate_real_line(const QContext<R>& ctx, Fn&& g, const RealContour& c) {
  using std::abs;
  const R eta = from_double<R>(c.eta);
  const R xmax = from_double<R>(c.x_max);
  Cplx<R> a, b;
  const Cplx<R> s =
      detail::trapezoid<R>([&](const R& x) { return g(Cplx<R>(x, eta)); }, xmax, c.n_points, &a, &b);
  const R c1 = measure_constant(ctx);
  const R tail = c1 * (abs(a) + abs(b)) / (ctx.L * xmax);
  if (tail > from_double<R>(c.tail_tolerance)) throw TailTooLarge("real-line integral tail too large");
  return c1 * s;
}

// (1 / 2 pi i) of the circle integral around p; the node count doubles once as a check.
template <class R, class Fn>
Cplx<R> residue_at(Fn&& f, const Cplx<R>& p, const R& radius, int n_points, double tolerance = 1e-10,
                   double* doubling_delta = nullptr) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (radius > R(0.25) || radius <= R(0)) throw std::invalid_argument("residue radius must be in (0, 0.25]");
  auto run = [&](int n) {
    std::vector<Cplx<R>> vals(n);
    for (int k = 0; k < n; ++k) {
      const R t = 2 * pi_v<R>() * R(k) / R(n);
      const Cplx<R> off(radius * cos(t), radius * sin(t));
      vals[k] = f(p + off) * off;
    }
    return pairwise_sum(vals) / R(n);
  };
  const Cplx<R> r1 = run(n_points);
  const Cplx<R> r2 = run(2 * n_points);
  const R scale = std::max(R(1), R(abs(r2)));
  const double delta = to_double(R(abs(r2 - r1) / scale));
  if (doubling_delta) *doubling_delta = delta;
  if (delta > tolerance) throw NotIsolated("residue not stable under node doubling");
  return r2;
}

// Gaussian line truncation from the tail budget: with M = max |f| e^{L y^2 / 2}
// sampled over one period, keep M e^{-L y^2 / 2} <= budget * scale beyond y_max.
template <class R, class Fn>
LineContour line_contour_for(const QContext<R>& ctx, Fn&& f, double xi, const R& scale,
                             double budget = 1e-12, int n_points = 2048) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::sqrt;
  const R x = from_double<R>(xi);
  const int samples = 96;
  R M(0);
  for (int k = 0; k <= samples; ++k) {
    const R y = ctx.torus_period * (R(k) / R(samples) - R(0.5));
    M = std::max(M, R(abs(f(Cplx<R>(x, y))) * exp(ctx.L * y * y / 2)));
  }
  const R s = scale > R(0) ? scale : R(1);
  const R ratio = M / (from_double<R>(budget) * s);
  R ymax = ratio > R(1) ? R(sqrt(2 * log(ratio) / ctx.L)) : R(1);
  ymax = std::max(ymax, R(ctx.torus_period / 2));
  LineContour c;
  c.xi = xi;
  c.y_max = std::ceil(to_double(ymax));
  c.n_points = n_points;
  return c;
}

// Working precision: binary64 when the dynamic range fits, MPFR otherwise.
struct PrecisionPlan {
  bool extended = false;
  unsigned digits = 0;
  double log10_peak = 0;
};

// binary64 carries ~16 digits relative to the peak; `guard` covers the growth
// of rounding errors over the quadrature sum.
inline PrecisionPlan plan_precision(double log10_peak, double log10_target, PrecisionMode mode,
                                    unsigned guard = 6) {
  PrecisionPlan plan;
  plan.log10_peak = log10_peak;
  const double need = std::max(0.0, log10_peak - log10_target) + guard;
  if (mode == PrecisionMode::binary64 || need <= 16) return plan;
  plan.extended = true;
  plan.digits = std::max(30u, unsigned(std::ceil(need)) + 10);
  return plan;
}

// Runs work.template operator()<R>() with R = double or Extended per the plan.
template <class Work>
auto with_precision(const PrecisionPlan& plan, Work&& work) {
  if (!plan.extended) return work.template operator()<double>();
  PrecisionScope scope(plan.digits);
  return work.template operator()<Extended>();
}

// Measure constants and the theta lemma on test functions.
CheckReport normalization_selftest(double q, double xi = 0);

}  // namespace qtrace
