#pragma once

#include "qtrace/errors.hpp"
#include "qtrace/scalar.hpp"

#include <limits>
#include <stdexcept>

namespace qtrace {

enum class PrecisionMode { binary64, extended };

// Deformation parameter and the constants derived from it. Weights are plain
// complex numbers in sl2 coordinates: fundamental weight = 1, alpha = 2,
// rho = 1, and 2(lambda, mu) = lambda * mu.
template <class R>
struct QContext {
  R q;
  R L;             // -ln q > 0
  R log_q;         // ln q < 0
  Cplx<R> kappa;   // i pi / ln q
  R torus_period;  // 2 pi / L, the length of C_xi / kappa Q^vee
  int theta_truncation = 60;
  PrecisionMode precision_mode = PrecisionMode::binary64;

  static QContext make(const R& q, int theta_truncation = 60,
                       PrecisionMode mode = PrecisionMode::binary64) {
    using std::log;
    if (!(q > 0 && q < 1)) throw std::invalid_argument("q must lie in (0, 1)");
    if (theta_truncation < 1) throw std::invalid_argument("theta_truncation must be >= 1");
    QContext c;
    c.q = q;
    c.log_q = log(q);
    c.L = -c.log_q;
    c.kappa = Cplx<R>(R(0), pi_v<R>() / c.log_q);
    c.torus_period = 2 * pi_v<R>() / c.L;
    c.theta_truncation = theta_truncation;
    c.precision_mode = mode;
    return c;
  }
};

template <class R>
QContext<R> make_context(double q, int theta_truncation = 60) {
  return QContext<R>::make(from_double<R>(q), theta_truncation,
                           is_extended_v<R> ? PrecisionMode::extended : PrecisionMode::binary64);
}

// q^x = exp(x ln q), single valued because q > 0.
template <class R>
Cplx<R> qpow(const QContext<R>& ctx, const Cplx<R>& x) {
  using std::exp;
  return exp(x * ctx.log_q);
}

template <class R>
R qpow(const QContext<R>& ctx, const R& x) {
  using std::exp;
  return exp(x * ctx.log_q);
}

template <class R>
R qpow(const QContext<R>& ctx, int x) {
  return qpow(ctx, R(x));
}

template <class T>
T pair2(const T& lambda, const T& mu) {
  return lambda * mu;
}

template <class R>
Cplx<R> qint(const QContext<R>& ctx, const Cplx<R>& n) {
  return (qpow(ctx, n) - qpow(ctx, Cplx<R>(-n))) / (ctx.q - 1 / ctx.q);
}

template <class R>
R qint(const QContext<R>& ctx, int n) {
  return (qpow(ctx, n) - qpow(ctx, -n)) / (ctx.q - 1 / ctx.q);
}

template <class R>
R qfact(const QContext<R>& ctx, int n) {
  if (n < 0) throw std::domain_error("q-factorial of a negative integer");
  R r(1);
  for (int i = 2; i <= n; ++i) r *= qint(ctx, i);
  return r;
}

template <class R>
R qbinom(const QContext<R>& ctx, int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("q-binomial needs 0 <= k <= n");
  return qfact(ctx, n) / (qfact(ctx, k) * qfact(ctx, n - k));
}

// delta_q(lambda) = q^lambda - q^-lambda
template <class R>
Cplx<R> weyl_denominator(const QContext<R>& ctx, const Cplx<R>& lambda) {
  return qpow(ctx, lambda) - qpow(ctx, Cplx<R>(-lambda));
}

// q^{-(lambda, lambda)}
template <class R>
Cplx<R> gaussian_weight(const QContext<R>& ctx, const Cplx<R>& lambda) {
  return qpow(ctx, Cplx<R>(-lambda * lambda / R(2)));
}

template <class R>
struct ThetaValue {
  Cplx<R> value;
  R tail_bound;
};

// gamma(lambda) = sum_beta q^{beta^2/2} q^{lambda beta}, |beta| <= B.
template <class R>
ThetaValue<R> theta_gamma(const QContext<R>& ctx, const Cplx<R>& lambda,
                          double tolerance = std::numeric_limits<double>::infinity()) {
  using std::abs;
  const int B = ctx.theta_truncation;
  const R x = abs(lambda.real());
  if (R(B) < x + 2) throw TailTooLarge("theta truncation too small for this strip");
  ThetaValue<R> out;
  out.value = Cplx<R>(1);
  if constexpr (is_extended_v<R>) {
    // Recurrence q^{(b+1)^2/2} = q^{b^2/2} q^{b + 1/2}; MPFR's exponent range
    // absorbs the growth of q^{-lambda b}.
    const Cplx<R> up = qpow(ctx, lambda), down = qpow(ctx, Cplx<R>(-lambda));
    Cplx<R> pu(1), pd(1);
    R g(1), step = qpow(ctx, R(0.5));
    for (int b = 1; b <= B; ++b) {
      g *= step;
      step *= ctx.q;
      pu *= up;
      pd *= down;
      out.value += g * (pu + pd);
    }
  } else {
    // One exponent per term so nothing overflows before the Gaussian factor acts.
    for (int b = B; b >= 1; --b) {
      const R h = R(b) * R(b) / 2;
      out.value += qpow(ctx, Cplx<R>(h + lambda * R(b))) + qpow(ctx, Cplx<R>(h - lambda * R(b)));
    }
  }
  out.tail_bound = qpow(ctx, R(B) * R(B) / 2 - x * R(B)) / (1 - ctx.q);
  if (out.tail_bound > from_double<R>(tolerance)) throw TailTooLarge("theta tail exceeds tolerance");
  return out;
}

// chi_n(q^{2 lambda}) as the weight sum, so no removable singularity arises.
template <class R>
Cplx<R> character(const QContext<R>& ctx, int n, const Cplx<R>& lambda) {
  if (n < 0) throw std::domain_error("character needs n >= 0");
  Cplx<R> s(0);
  for (int j = 0; j <= n; ++j) s += qpow(ctx, Cplx<R>(lambda * R(n - 2 * j)));
  return s;
}

template <class R>
R qdim(const QContext<R>& ctx, int n) {
  return qint(ctx, n + 1);
}

}  // namespace qtrace
