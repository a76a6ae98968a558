#pragma once

#include "qtrace/qnum.hpp"
#include "qtrace/uqsl2.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace qtrace {

// Trace functions for V = L_{2m}; N = m bounds the pole depth in lambda.
// Holds the lambda- and mu-independent factors of the closed forms.
template <class R>
struct TraceFunctionParams {
  QContext<R> ctx;
  int m = 0;
  std::vector<R> sum_coeff;  // q^{2m + l(l-1)/2} (q - q^-1)^l [m+l]! / ([l]! [m-l]!)
  std::vector<R> even;       // q^{2j} for j = -(m+1) .. m+1

  TraceFunctionParams() = default;
  TraceFunctionParams(const QContext<R>& c, int m_) : ctx(c), m(m_) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    R dq_pow(1);
    for (int l = 0; l <= m; ++l) {
      sum_coeff.push_back(qpow(ctx, R(2 * m) + R(l * (l - 1)) / 2) * dq_pow * qfact(ctx, m + l) /
                          (qfact(ctx, l) * qfact(ctx, m - l)));
      dq_pow *= ctx.q - 1 / ctx.q;
    }
    for (int j = -(m + 1); j <= m + 1; ++j) even.push_back(qpow(ctx, R(2 * j)));
  }

  int N() const { return m; }
  const R& q2(int j) const { return even[j + m + 1]; }  // q^{2j}
};

template <class R>
TraceFunctionParams<R> make_params(double q, int m, int theta_truncation = 60) {
  return TraceFunctionParams<R>(make_context<R>(q, theta_truncation), m);
}

namespace detail {

inline constexpr double kNearPole = 1e-12;

// a - b, refusing when it cancels to within kNearPole of the larger operand
template <class R>
Cplx<R> guarded_diff(const Cplx<R>& a, const Cplx<R>& b, const char* what) {
  using std::abs;
  const Cplx<R> d = a - b;
  R scale = abs(a) > abs(b) ? abs(a) : abs(b);
  if (scale < R(1)) scale = R(1);
  if (abs(d) < R(kNearPole) * scale) throw NearPole(what);
  return d;
}

// Cauchy formula on a circle around `center`, for values near a removable point.
template <class R, class Fn>
Cplx<R> cauchy_eval(Fn&& f, const Cplx<R>& center, const R& radius, int n, const Cplx<R>& z) {
  using std::cos;
  using std::sin;
  Cplx<R> s(0);
  const R two_pi = 2 * pi_v<R>();
  for (int k = 0; k < n; ++k) {
    const R t = two_pi * R(k) / R(n);
    const Cplx<R> off(radius * cos(t), radius * sin(t));
    const Cplx<R> zeta = center + off;
    s += f(zeta) * off / (zeta - z);
  }
  return s / R(n);
}

}  // namespace detail

// Summands of the closed form for F(lambda, mu); their sum is F.
template <class R>
std::vector<Cplx<R>> F_closed_terms(const TraceFunctionParams<R>& p, const Cplx<R>& lambda,
                                    const Cplx<R>& mu) {
  using C = Cplx<R>;
  const int m = p.m;
  const C x = qpow(p.ctx, C(R(-2) * lambda));  // q^{-2 lambda}
  const C y = qpow(p.ctx, C(R(-2) * mu));      // q^{-2 mu}
  C pre = qpow(p.ctx, C(-lambda * mu));
  for (int j = 1; j <= m; ++j) {
    pre *= (p.q2(-j) * y - R(1)) /
           detail::guarded_diff(C(p.q2(1 - j) * y), C(p.q2(-m)), "F: mu on a pole");
  }
  std::vector<C> terms;
  terms.reserve(m + 1);
  C den(1), x_pow(1);
  for (int l = 0; l <= m; ++l) {
    if (l > 0) {
      den *= detail::guarded_diff(C(1), C(p.q2(-l) * y), "F: mu on a removable point");
      den *= detail::guarded_diff(C(1), C(p.q2(l) * x), "F: lambda on a pole");
      x_pow *= x;
    }
    terms.push_back(pre * p.sum_coeff[l] * x_pow / den);
  }
  return terms;
}

template <class R>
Cplx<R> F_closed(const TraceFunctionParams<R>& p, const Cplx<R>& lambda, const Cplx<R>& mu) {
  Cplx<R> s(0);
  for (const auto& t : F_closed_terms(p, lambda, mu)) s += t;
  return s;
}

// Q_V^{-1}(-mu - rho) on V[0]
template <class R>
Cplx<R> Q_closed_inv(const TraceFunctionParams<R>& p, const Cplx<R>& mu) {
  using C = Cplx<R>;
  const C z = qpow(p.ctx, C(R(2) * mu));
  C r(1);
  for (int j = 1; j <= p.m; ++j)
    r *= (R(1) - z * p.q2(j)) / detail::guarded_diff(C(1), C(z * p.q2(-j)), "Q^-1: mu on a pole");
  return r;
}

// Q_V(nu) on V[0]
template <class R>
Cplx<R> Q_closed(const TraceFunctionParams<R>& p, const Cplx<R>& nu) {
  using C = Cplx<R>;
  const C z = qpow(p.ctx, C(R(-2) * (nu + R(1))));
  C r(1);
  for (int j = 1; j <= p.m; ++j)
    r *= (R(1) - z * p.q2(-j)) / detail::guarded_diff(C(1), C(z * p.q2(j)), "Q: nu on a pole");
  return r;
}

// Psi(lambda, mu) recovered from F(lambda, -mu - 1) = delta(lambda) Psi(lambda, mu) / Q_V(mu).
template <class R>
Cplx<R> Psi_closed(const TraceFunctionParams<R>& p, const Cplx<R>& lambda, const Cplx<R>& mu) {
  using C = Cplx<R>;
  const C d = weyl_denominator(p.ctx, lambda);
  if (std::abs(to_cdouble(d)) < detail::kNearPole) throw NearPole("Psi: delta(lambda) vanishes");
  return F_closed(p, lambda, C(-mu - R(1))) * Q_closed(p, mu) / d;
}

// Psi times prod_{i<m} (q^{mu-i} - q^{-mu+i}); entire in mu. Near the integer
// points where the direct formula is 0/0 the value comes from a Cauchy integral.
template <class R>
Cplx<R> Psi_tilde(const TraceFunctionParams<R>& p, const Cplx<R>& lambda, const Cplx<R>& mu) {
  using C = Cplx<R>;
  using std::abs;
  using std::floor;
  const auto direct = [&](const C& z) {
    C f(1);
    for (int i = 0; i < p.m; ++i) f *= qpow(p.ctx, C(z - R(i))) - qpow(p.ctx, C(-z + R(i)));
    return Psi_closed(p, lambda, z) * f;
  };
  if (p.m == 0) return direct(mu);
  // Removable points: integers in [-m-1, m-1] shifted by multiples of i pi / L.
  const R period = pi_v<R>() / p.ctx.L;
  const R shift = floor(mu.imag() / period + R(0.5)) * period;
  const R re = floor(mu.real() + R(0.5));
  const C nearest(re, shift);
  const bool candidate = re >= R(-p.m - 1) && re <= R(p.m - 1);
  if (candidate && abs(mu - nearest) < R(0.05))
    return detail::cauchy_eval<R>(direct, nearest, R(0.25), 64, mu);
  return direct(mu);
}

// (-1)^m prod_j [mu+1+j] / [mu+1-j], the value of A_{s,V}(mu) on V[0]
template <class R>
Cplx<R> dynamical_weyl_closed(const TraceFunctionParams<R>& p, const Cplx<R>& mu) {
  using C = Cplx<R>;
  C r(p.m % 2 ? -1 : 1);
  for (int j = 1; j <= p.m; ++j)
    r *= qint(p.ctx, C(mu + R(1 + j))) / qint(p.ctx, C(mu + R(1 - j)));
  return r;
}

// Finite-dimensional trace Psi_n on L_n and, for the anti-dominant label
// nu = -n - 1, F_nu(lambda) = delta(lambda) Psi_n(lambda) Q_V^{-1}(n).
template <class R>
class FindimTrace {
 public:
  FindimTrace(const TraceFunctionParams<R>& p, int nu, DualFlag which = DualFlag::module)
      : p_(p), nu_(nu), n_(-nu - 1) {
    if (n_ < p.m) throw NoIntertwiner("F_nu needs -nu - 1 >= m");
    const Context dctx = make_context<double>(to_double(p.ctx.q), p.ctx.theta_truncation);
    FinDimModule V = irreducible(dctx, 2 * p.m);
    if (which == DualFlag::right_dual) V = right_dual(dctx, V);
    if (which == DualFlag::left_dual) V = left_dual(dctx, V);
    for (const cdouble& d : findim_trace_coefficients(dctx, V, n_))
      coeffs_.push_back(from_double<R>(d));
    q_inv_ = Q_closed_inv(p, Cplx<R>(R(nu)));
  }

  int label() const { return nu_; }
  int dominant() const { return n_; }

  // exponent a -> coefficient of q^{lambda a}
  std::map<int, Cplx<R>> laurent() const {
    std::map<int, Cplx<R>> out;
    for (int k = 0; k <= n_; ++k) out[n_ - 2 * k] += coeffs_[k];
    return out;
  }

  Cplx<R> psi(const Cplx<R>& lambda) const {
    Cplx<R> s(0);
    Cplx<R> term = qpow(p_.ctx, Cplx<R>(lambda * R(n_)));
    const Cplx<R> step = qpow(p_.ctx, Cplx<R>(R(-2) * lambda));
    for (int k = 0; k <= n_; ++k, term *= step) s += term * coeffs_[k];
    return s;
  }

  Cplx<R> operator()(const Cplx<R>& lambda) const {
    return weyl_denominator(p_.ctx, lambda) * psi(lambda) * q_inv_;
  }

 private:
  TraceFunctionParams<R> p_;
  int nu_;
  int n_;
  std::vector<Cplx<R>> coeffs_;
  Cplx<R> q_inv_;
};

template <class R>
Cplx<R> F_findim(const TraceFunctionParams<R>& p, int nu, const Cplx<R>& lambda) {
  return FindimTrace<R>(p, nu)(lambda);
}

template <class R>
struct Pole {
  R location;
  Cplx<R> period;
};

// lambda-poles of F in one period strip: {1..m} + kappa Z
template <class R>
std::vector<Pole<R>> pole_list(const TraceFunctionParams<R>& p) {
  std::vector<Pole<R>> out;
  for (int j = 1; j <= p.m; ++j) out.push_back({R(j), p.ctx.kappa});
  return out;
}

}  // namespace qtrace
