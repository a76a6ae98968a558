#include "qtrace/qnum.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qtrace;

namespace {

const QContext<double> ctx = make_context<double>(0.5);

}  // namespace

TEST(QContext, DerivedConstants) {
  EXPECT_NEAR(ctx.L, std::log(2.0), 1e-15);
  EXPECT_NEAR(ctx.kappa.imag(), -M_PI / std::log(2.0), 1e-14);
  EXPECT_NEAR(ctx.torus_period, 2 * M_PI / std::log(2.0), 1e-14);
  EXPECT_THROW(make_context<double>(1.5), std::invalid_argument);
  EXPECT_THROW(make_context<double>(0.0), std::invalid_argument);
  EXPECT_THROW(make_context<double>(0.5, 0), std::invalid_argument);
}

TEST(QNumbers, IntegersAndFactorials) {
  EXPECT_DOUBLE_EQ(qint(ctx, 0), 0.0);
  EXPECT_DOUBLE_EQ(qint(ctx, 1), 1.0);
  EXPECT_NEAR(qint(ctx, 2), 0.5 + 2.0, 1e-15);
  EXPECT_NEAR(qint(ctx, 3), 0.25 + 1 + 4, 1e-14);
  EXPECT_NEAR(qint(ctx, -3), -qint(ctx, 3), 1e-14);
  EXPECT_NEAR(qfact(ctx, 4), qint(ctx, 2) * qint(ctx, 3) * qint(ctx, 4), 1e-12);
  EXPECT_THROW(qfact(ctx, -1), std::domain_error);
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k) EXPECT_NEAR(qbinom(ctx, n, k) / qbinom(ctx, n, n - k), 1.0, 1e-13);
  EXPECT_THROW(qbinom(ctx, 3, 4), std::domain_error);
}

TEST(QNumbers, ComplexIntegerMatchesReal) {
  for (int n = -4; n <= 4; ++n) EXPECT_NEAR(std::abs(qint(ctx, cdouble(n)) - qint(ctx, n)), 0.0, 1e-13);
}

TEST(QNumbers, QPowerIsExponential) {
  const cdouble x(0.3, -1.2);
  EXPECT_NEAR(std::abs(qpow(ctx, x) - std::exp(x * std::log(0.5))), 0.0, 1e-15);
  EXPECT_NEAR(qpow(ctx, 2), 0.25, 1e-16);
}

TEST(QNumbers, CharacterAndWeylDenominator) {
  const cdouble l(0.37, 0.21);
  for (int n = 0; n <= 5; ++n) {
    // chi_n delta = q^{(n+1) lambda} - q^{-(n+1) lambda}
    const cdouble lhs = character(ctx, n, l) * weyl_denominator(ctx, l);
    const cdouble rhs = weyl_denominator(ctx, cdouble(double(n + 1)) * l);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-13);
  }
  EXPECT_NEAR(std::abs(character(ctx, 4, cdouble(0))), 5.0, 1e-15);
  EXPECT_NEAR(qdim(ctx, 3), qint(ctx, 4), 1e-15);
}

TEST(Theta, EvenQuasiPeriodicAndTailBounded) {
  const cdouble l(0.4, 0.3);
  const auto a = theta_gamma(ctx, l);
  const auto b = theta_gamma(ctx, cdouble(-l));
  EXPECT_NEAR(std::abs(a.value - b.value), 0.0, 1e-13);
  EXPECT_LT(a.tail_bound, 1e-200);
  // gamma(lambda + 1) = q^{-lambda - 1/2} gamma(lambda)
  const auto c = theta_gamma(ctx, cdouble(l + 1.0));
  EXPECT_NEAR(std::abs(c.value - qpow(ctx, cdouble(-l - 0.5)) * a.value), 0.0, 1e-12);
  // q^{kappa b} = (-1)^b, so gamma has period 2 kappa
  const auto d = theta_gamma(ctx, cdouble(l + 2.0 * ctx.kappa));
  EXPECT_NEAR(std::abs(d.value - a.value), 0.0, 1e-12);
}

TEST(Theta, ExtendedAgreesWithDouble) {
  PrecisionScope scope(40);
  const auto e = make_context<Extended>(0.5);
  const Cplx<Extended> l(Extended("0.4"), Extended("0.3"));
  const cdouble ve = to_cdouble(theta_gamma(e, l).value);
  const cdouble vd = theta_gamma(ctx, cdouble(0.4, 0.3)).value;
  EXPECT_NEAR(std::abs(ve - vd) / std::abs(ve), 0.0, 1e-14);
}

TEST(Theta, TruncationGuards) {
  const auto small = make_context<double>(0.5, 4);
  EXPECT_THROW(theta_gamma(small, cdouble(3.0, 0)), TailTooLarge);
  EXPECT_THROW(theta_gamma(small, cdouble(0.1, 0), 1e-30), TailTooLarge);
}

TEST(Scalar, DecimalRoundTrip) {
  PrecisionScope scope(50);
  const Extended x = from_double<Extended>(0.3);
  EXPECT_EQ(x, Extended("0.3"));
  EXPECT_DOUBLE_EQ(to_double(x), 0.3);
  EXPECT_EQ(from_double<long double>(0.25), 0.25L);
}
