#include "qtrace/tracefn.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qtrace;

namespace {

const Context ctx = make_context<double>(0.5);

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Closed form of F for V = L_2.
cdouble f_m1(cdouble l, cdouble mu) {
  const double q2 = 0.25;
  return qpow(ctx, cdouble(-l * mu)) *
         (qpow(ctx, cdouble(2.0 * (l + mu))) - qpow(ctx, cdouble(2.0 * l)) / q2 -
          qpow(ctx, cdouble(2.0 * mu)) / q2 + 1.0) /
         ((1.0 - qpow(ctx, cdouble(2.0 * l)) / q2) * (1.0 - qpow(ctx, cdouble(2.0 * mu)) / q2));
}

std::vector<cdouble> samples(unsigned seed, int n) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> re(-1.7, 1.7), im(-0.9, 0.9);
  std::vector<cdouble> out;
  for (int i = 0; i < n; ++i) {
    const double a = re(gen), b = im(gen);
    out.emplace_back(a + 0.013, b);
  }
  return out;
}

}  // namespace

TEST(TraceFunction, TrivialVIsExponential) {
  const auto p = make_params<double>(0.5, 0);
  for (const cdouble l : samples(1, 5))
    for (const cdouble mu : samples(2, 5))
      EXPECT_LT(rel(F_closed(p, l, mu), qpow(ctx, cdouble(-l * mu))), 1e-14);
}

TEST(TraceFunction, AdjointClosedForm) {
  const auto p = make_params<double>(0.5, 1);
  for (const cdouble l : samples(3, 6))
    for (const cdouble mu : samples(4, 6)) EXPECT_LT(rel(F_closed(p, l, mu), f_m1(l, mu)), 1e-12);
}

TEST(TraceFunction, SymmetricInItsArguments) {
  for (int m = 1; m <= 3; ++m) {
    const auto p = make_params<double>(0.5, m);
    const auto ls = samples(5 + m, 8), mus = samples(9 + m, 8);
    for (int i = 0; i < 8; ++i) EXPECT_LT(rel(F_closed(p, ls[i], mus[i]), F_closed(p, mus[i], ls[i])), 1e-11);
  }
}

TEST(TraceFunction, TermsSumToValue) {
  const auto p = make_params<double>(0.5, 3);
  const cdouble l(0.3, 0.2), mu(-0.7, 0.4);
  cdouble s = 0;
  for (const cdouble t : F_closed_terms(p, l, mu)) s += t;
  EXPECT_EQ(F_closed_terms(p, l, mu).size(), 4u);
  EXPECT_LT(rel(s, F_closed(p, l, mu)), 1e-15);
}

TEST(TraceFunction, RefusesPoles) {
  const auto p = make_params<double>(0.5, 2);
  EXPECT_THROW(F_closed(p, cdouble(1), cdouble(0.3)), NearPole);
  EXPECT_THROW(F_closed(p, cdouble(0.3), cdouble(2)), NearPole);
  EXPECT_THROW(F_closed(p, cdouble(2.0, ctx.kappa.imag()), cdouble(0.3)), NearPole);
  EXPECT_THROW(Q_closed_inv(p, cdouble(1)), NearPole);
  EXPECT_THROW(Psi_closed(p, cdouble(0), cdouble(0.3)), NearPole);
  const auto poles = pole_list(p);
  ASSERT_EQ(poles.size(), 2u);
  EXPECT_EQ(poles[0].location, 1.0);
  EXPECT_EQ(poles[1].location, 2.0);
  EXPECT_EQ(poles[1].period, ctx.kappa);
}

TEST(QOperator, FrozenValues) {
  EXPECT_NEAR(Q_closed_inv(make_params<double>(0.5, 2), cdouble(0.4)).real(), 0.0777090913569634, 1e-15);
  EXPECT_NEAR(Q_closed(make_params<double>(0.5, 1), cdouble(8)).real(), 16.0002288853, 1e-9);
}

TEST(QOperator, InverseAndProduct) {
  for (int m = 0; m <= 3; ++m) {
    const auto p = make_params<double>(0.5, m);
    for (const cdouble mu : samples(20 + m, 6))
      EXPECT_LT(rel(Q_closed_inv(p, mu) * Q_closed(p, cdouble(-mu - 1.0)), 1.0), 1e-12);
  }
}

TEST(Psi, ClosedFormMatchesSeries) {
  for (int m = 1; m <= 3; ++m) {
    const auto p = make_params<double>(0.5, m);
    const cdouble l(-3, 0.7);
    for (const cdouble mu : samples(30 + m, 4)) {
      const cdouble closed = Psi_closed(p, l, mu);
      EXPECT_LT(std::abs(trace_series_psi(ctx, l, mu, m, 200) - closed) / std::abs(closed), 1e-9);
    }
  }
}

TEST(Psi, TildeIsContinuousAtRemovablePoints) {
  const auto p = make_params<double>(0.5, 2);
  const cdouble l(0.4, 0.3);
  // 0.06 away uses the direct formula, 0.04 away the Cauchy integral
  const cdouble a = Psi_tilde(p, l, cdouble(1.06)), b = Psi_tilde(p, l, cdouble(1.04));
  const cdouble c = Psi_tilde(p, l, cdouble(1.05));
  EXPECT_LT(std::abs(a - 2.0 * c + b) / std::abs(c), 1e-2);
  EXPECT_NO_THROW(Psi_tilde(p, l, cdouble(1)));
}

TEST(DynamicalWeyl, ClosedFormCocycle) {
  for (int m = 0; m <= 3; ++m) {
    const auto p = make_params<double>(0.5, m);
    for (const cdouble mu : samples(40 + m, 5))
      EXPECT_LT(rel(dynamical_weyl_closed(p, mu) * dynamical_weyl_closed(p, cdouble(-mu - 2.0)), 1.0), 1e-11);
  }
}

TEST(FindimTrace, TrivialVGivesWeylCharacter) {
  const auto p = make_params<double>(0.5, 0);
  const cdouble l(0.3, 0.2);
  const FindimTrace<double> f(p, -6);
  EXPECT_EQ(f.dominant(), 5);
  EXPECT_EQ(f.label(), -6);
  EXPECT_LT(rel(f.psi(l), character(ctx, 5, l)), 1e-13);
  EXPECT_LT(rel(f(l), weyl_denominator(ctx, l) * character(ctx, 5, l)), 1e-13);
}

TEST(FindimTrace, LaurentExpansionReproducesPsi) {
  const auto p = make_params<double>(0.5, 1);
  const FindimTrace<double> f(p, -9);
  const cdouble l(0.21, -0.4);
  cdouble s = 0;
  for (const auto& [e, c] : f.laurent()) s += c * qpow(ctx, cdouble(l * double(e)));
  EXPECT_LT(rel(s, f.psi(l)), 1e-13);
  EXPECT_THROW(FindimTrace<double>(p, 0), NoIntertwiner);
}

TEST(Precision, ExtendedAgreesWithDouble) {
  PrecisionScope scope(40);
  const auto pe = make_params<Extended>(0.5, 2);
  const auto pd = make_params<double>(0.5, 2);
  const cdouble l(0.3, 0.2), mu(-0.7, 0.4);
  const cdouble fe = to_cdouble(F_closed(pe, from_double<Extended>(l), from_double<Extended>(mu)));
  EXPECT_LT(rel(fe, F_closed(pd, l, mu)), 1e-14);
}
