#pragma once

// Helpers shared by the verify_*.cpp translation units.

#include "qtrace/errors.hpp"
#include "qtrace/quad.hpp"
#include "qtrace/report.hpp"
#include "qtrace/tracefn.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>

namespace qtrace::detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform complex samples in a box, rejecting points within `gap` of an
// integer in [lo_int, hi_int] (real part) when the imaginary part is small.
class PointSampler {
 public:
  PointSampler(unsigned seed, double re_lo, double re_hi, double im_lo, double im_hi)
      : gen_(seed), re_(re_lo, re_hi), im_(im_lo, im_hi) {}

  cdouble operator()(int lo_int = 1, int hi_int = 0, double gap = 0.15) {
    for (;;) {
      const cdouble z(re_(gen_), im_(gen_));
      const double r = std::round(z.real());
      const bool near = r >= lo_int && r <= hi_int && std::abs(z - cdouble(r, 0)) < gap;
      if (!near) return z;
    }
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
  std::uniform_real_distribution<double> re_, im_;
};

template <class R>
double log10_abs(const Cplx<R>& z) {
  using std::abs;
  using std::log10;
  const R a = abs(z);
  if (a == R(0)) return -kInf;
  return to_double(R(log10(a)));
}

struct Probe {
  double log10_peak = -kInf;
  double log10_scale = 0;  // log10 |rhs|, 0 when the rhs vanishes
};

// Samples |f| along C_xi over one period with 30 digits. `make` is a generic
// lambda returning {integrand, rhs} for a scalar type R.
template <class Make>
Probe probe_contour(double q, double xi, Make&& make, int samples = 64) {
  PrecisionPlan plan;
  plan.extended = true;
  plan.digits = 30;
  return with_precision(plan, [&]<class R>() {
    const QContext<R> ctx = make_context<R>(q);
    auto [f, rhs] = make.template operator()<R>();
    Probe pr;
    const R x = from_double<R>(xi);
    for (int k = 0; k < samples; ++k) {
      const R y = ctx.torus_period * ((R(k) + R(0.5)) / R(samples) - R(0.5));
      pr.log10_peak = std::max(pr.log10_peak, log10_abs(Cplx<R>(f(Cplx<R>(x, y)))));
    }
    const double s = log10_abs(Cplx<R>(rhs));
    pr.log10_scale = std::isfinite(s) ? s : 0;
    return pr;
  });
}

inline double rel_delta(cdouble a, cdouble b, double scale) {
  const double s = scale > 0 ? scale : 1;
  return std::abs(a - b) / s;
}

inline void finish(CheckReport& r, const PrecisionPlan& plan, const Stopwatch& sw) {
  r.digits = plan.extended ? plan.digits : 0;
  r.runtime_ms = sw.ms();
}

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace qtrace::detail
