#include "qtrace/tracefn.hpp"
#include "qtrace/uqsl2.hpp"

#include <gtest/gtest.h>

using namespace qtrace;

namespace {

const Context ctx = make_context<double>(0.5);

double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Modules, IrreducibleAndDualsSatisfyRelations) {
  for (int n = 0; n <= 6; ++n) {
    const FinDimModule V = irreducible(ctx, n);
    EXPECT_EQ(V.dim(), n + 1);
    EXPECT_LT(relation_defect(ctx, V), 1e-12);
    EXPECT_LT(relation_defect(ctx, right_dual(ctx, V)), 1e-12);
    EXPECT_LT(relation_defect(ctx, left_dual(ctx, V)), 1e-12);
  }
  EXPECT_THROW(irreducible(ctx, -1), std::invalid_argument);
  EXPECT_THROW(irreducible(ctx, 3).zero_weight_index(), std::invalid_argument);
}

TEST(Modules, CoproductIsAlgebraMap) {
  const FinDimModule U = irreducible(ctx, 2), V = irreducible(ctx, 3);
  for (const bool op : {false, true}) {
    const Matrix E = coproduct(ctx, U, V, 'E', op), F = coproduct(ctx, U, V, 'F', op);
    const Matrix K = coproduct(ctx, U, V, 'K', op);
    const Matrix h = (K - K.inverse()) / (ctx.q - 1 / ctx.q);
    EXPECT_LT(max_abs(E * F - F * E - h), 1e-12);
    EXPECT_LT(max_abs(K * E * K.inverse() - ctx.q * ctx.q * E), 1e-12);
  }
  EXPECT_THROW(coproduct(ctx, U, V, 'X'), std::invalid_argument);
}

TEST(Modules, RMatrixIntertwinesCoproducts) {
  const FinDimModule U = irreducible(ctx, 2), V = irreducible(ctx, 3);
  const Matrix R = r_matrix(ctx, U, V);
  for (const char g : {'E', 'F', 'K'}) {
    const Matrix lhs = R * coproduct(ctx, U, V, g);
    const Matrix rhs = coproduct(ctx, U, V, g, true) * R;
    EXPECT_LT(max_abs(lhs - rhs) / max_abs(lhs), 1e-12) << g;
  }
}

TEST(Verma, TruncatedModuleActsAsExpected) {
  const TruncatedVerma M{cdouble(0.3, 0.1), 6};
  const Matrix E = M.E(ctx), F = M.F();
  // EF - FE = [mu - 2k] on f^k x away from the truncation edge
  const Matrix c = E * F - F * E;
  for (int k = 0; k < 6; ++k)
    EXPECT_NEAR(std::abs(c(k, k) - qint(ctx, cdouble(M.mu - 2.0 * k))), 0.0, 1e-12);
}

TEST(Intertwiner, SolvesSingularVectorEquations) {
  const FinDimModule V = irreducible(ctx, 4);
  const auto ic = solve_intertwiner(ctx, cdouble(0.37, 0.2), 2, 20);
  EXPECT_EQ(ic.weight_w, 0);
  EXPECT_LT(singularity_defect(ctx, V, ic), 1e-12);
  // integral mu - weight hits the resonant pivot [0]
  EXPECT_THROW(solve_intertwiner(ctx, cdouble(1.0), 2, 20), ResonantWeight);
}

TEST(Fusion, UnitLowerTriangular) {
  const FinDimModule U = irreducible(ctx, 2), V = irreducible(ctx, 4);
  const Matrix J = fusion_matrix(ctx, U, V, cdouble(0.3, 0.4));
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    EXPECT_NEAR(std::abs(J(i, i) - 1.0), 0.0, 1e-14);
    for (Eigen::Index j = i + 1; j < J.cols(); ++j) EXPECT_EQ(J(i, j), cdouble(0));
  }
}

TEST(Fusion, ExtendedInstantiationAgrees) {
  using T = long double;
  const QContext<T> lctx = QContext<T>::make(0.5L);
  const Matrix Rd = exchange_matrix(ctx, irreducible(ctx, 2), irreducible(ctx, 2), cdouble(0.3, 0.4));
  const MatrixT<T> Rl =
      exchange_matrix(lctx, irreducible(lctx, 2), irreducible(lctx, 2), Cplx<T>(0.3L, 0.4L));
  const Matrix Rc = Rl.unaryExpr([](const Cplx<T>& z) { return cdouble(double(z.real()), double(z.imag())); });
  EXPECT_LT(max_abs(Rd - Rc) / max_abs(Rc), 1e-13);
}

TEST(Oracles, QOperatorMatchesClosedForm) {
  const auto p1 = make_params<double>(0.5, 1);
  const cdouble q8 = q_operator_oracle(ctx, 1, cdouble(8));
  EXPECT_NEAR(q8.real(), 16.0002288853, 1e-9);
  EXPECT_NEAR(std::abs(q8 - Q_closed(p1, cdouble(8))), 0.0, 1e-11);
  const auto p2 = make_params<double>(0.5, 2);
  const cdouble nu(0.41, 0.13);
  EXPECT_LT(std::abs(q_operator_oracle(ctx, 2, nu) / Q_closed(p2, nu) - 1.0), 1e-10);
}

TEST(Oracles, DynamicalWeylMatchesClosedForm) {
  for (int m = 0; m <= 3; ++m) {
    const auto p = make_params<double>(0.5, m);
    for (int mu = m + 5; mu <= m + 9; ++mu) {
      const cdouble closed = dynamical_weyl_closed(p, cdouble(mu));
      EXPECT_LT(std::abs(dynamical_weyl(ctx, m, mu) / closed - 1.0), 1e-10);
      EXPECT_LT(std::abs(dynamical_weyl(ctx, m, mu, DualFlag::right_dual) / closed - 1.0), 1e-10);
    }
  }
  EXPECT_THROW(dynamical_weyl(ctx, 3, 2), TruncationTooSmall);
}

TEST(Oracles, TraceSeriesAndFiniteTraces) {
  EXPECT_THROW(trace_series(ctx, cdouble(0.5, 0), cdouble(0.3), 1), Divergent);
  const SeriesValue s = trace_series(ctx, cdouble(-3, 0.2), cdouble(0.3, 0.1), 1, 200);
  EXPECT_LT(s.tail_estimate, 1e-300);
  // m = 0: the finite trace on L_n is the character
  const cdouble l(0.3, 0.2);
  EXPECT_NEAR(std::abs(findim_trace_psi(ctx, 5, l, 0) - character(ctx, 5, l)), 0.0, 1e-12);
  EXPECT_THROW(findim_trace_coefficients(ctx, irreducible(ctx, 4), 1), NoIntertwiner);
  EXPECT_THROW(findim_trace_coefficients(ctx, irreducible(ctx, 2), -1), std::invalid_argument);
}

TEST(Oracles, MacdonaldCoefficientsForTrivialV) {
  // m = 0: D applied to q^{lambda nu} gives chi(q^{-2 nu}) q^{lambda nu}
  const cdouble l(0.3, 0.6), nu(0.2, 0.1);
  const MRCoefficients a = mr_operator_coeffs(ctx, 0, l);
  cdouble d = 0;
  for (const int s : {2, 0, -2}) d += a.at(s) * qpow(ctx, cdouble(-(l + double(s)) * nu));
  const cdouble chi = qpow(ctx, -2.0 * nu) + 1.0 + qpow(ctx, 2.0 * nu);
  EXPECT_LT(std::abs(d - chi * qpow(ctx, cdouble(-l * nu))) / std::abs(d), 1e-12);
}
