#pragma once

#include "qtrace/quad.hpp"
#include "qtrace/report.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qtrace {

// Quadrature settings shared by the integral checks.
struct QuadratureOptions {
  int torus_n = 256;
  int line_n = 2048;
  double tail_budget = 1e-12;
  PrecisionMode mode = PrecisionMode::extended;  // binary64 forbids MPFR even when digits run short
};

// Convention gate: series against closed forms, Q oracle against the product,
// Example-style closed forms for m = 0 and m = 1.
std::vector<CheckReport> check_oracle_consistency(double q, int m, unsigned seed = 1, int K = 200);

// F(lambda, mu) = F(mu, lambda) at random complex pairs.
CheckReport check_symmetry(double q, int m, int samples = 200, unsigned seed = 2, double tol = 1e-11);

// Torus integral of F(mu, -lambda) F(lambda, nu), nu - mu integral.
CheckReport check_orthogonality(double q, int m, double mu, double nu, double xi,
                                const QuadratureOptions& opt = {}, double tol = 1e-9);

// Gaussian line integral of F(mu, -lambda) F(lambda, nu) q^{-lambda^2/2}.
CheckReport check_heat(double q, int m, double mu, double nu, double xi,
                       const QuadratureOptions& opt = {}, double tol = 1e-8);

// Summand-pair integrals of the heat identity: the sum must match, and at least
// one pair must stay away from every closed-form monomial by more than `gap`.
CheckReport check_heat_cancellation(double q, int m, double mu, double nu, double xi,
                                    const QuadratureOptions& opt = {}, double tol = 1e-7,
                                    double gap = 1e-3);

// Torus orthogonality of finite-dimensional traces, F-form and Psi-form.
// mu, nu are dominant; the F-form uses the labels -mu-1, -nu-1.
std::vector<CheckReport> check_orthogonality_findim(double q, int m, int mu, int nu, double xi,
                                                    const QuadratureOptions& opt = {},
                                                    double tol = 1e-9);

// Gaussian line integrals of finite-dimensional traces (F-form, Psi-form against
// a Laurent-coefficient oracle) and the symmetry in (mu, nu).
std::vector<CheckReport> check_heat_findim(double q, int m, int mu, int nu, double xi,
                                           const QuadratureOptions& opt = {}, double tol = 1e-7,
                                           double sym_tol = 1e-9);

// gamma(lambda) = (1 - q^2) sum_beta q^{beta(beta+2)/2} chi_beta [beta+1].
CheckReport check_kostant(double q, const std::vector<cdouble>& lambdas, int truncation = 60,
                          double tol = 1e-10);

// Line integral against q^{-lambda^2/2} equals torus integral against gamma,
// on random trigonometric polynomials.
CheckReport check_theta_lemma(double q, int polys = 10, double xi = 0, unsigned seed = 3,
                              double tol = 1e-9);

// Two-term Weyl expansions of F_mu (mu anti-dominant) and Psi_n, and the
// symmetry F(lambda, mu) = A_s(lambda - 1) F(-lambda, -mu) A_{s,V*}(mu - 1).
std::vector<CheckReport> check_weyl_character_formula(double q, int m, int mu,
                                                      const std::vector<cdouble>& lambdas,
                                                      double tol = 1e-8);

// A(mu) A(-mu - 2) = 1 and the oracle against its closed form, mu in [mu_from, mu_to].
CheckReport check_dynamical_weyl_cocycle(double q, int m, int mu_from, int mu_to,
                                         double tol = 1e-9);

// Residues of F(mu, -lambda) F(lambda, nu) at +-k cancel, and the Gaussian
// integrals over C_xi and C_{-xi} agree.
std::vector<CheckReport> check_residues_and_chambers(double q, int m, double mu, double nu,
                                                     double xi, const QuadratureOptions& opt = {},
                                                     double res_tol = 1e-8,
                                                     double chamber_tol = 1e-8);

// Psi~(lambda, k) = Psi~(lambda, -k - 2) for k = 0..m-1.
CheckReport check_resonance(double q, int m, int samples = 20, unsigned seed = 4,
                            double tol = 1e-10);

// Eigenvalue residual of the Macdonald-Ruijsenaars operator for U = L_2 and
// the coefficient identity a^V_s(-lambda - s) = a^{V*}_s(lambda).
std::vector<CheckReport> check_mr_eigen_and_selfadjoint(double q, int m, int samples = 10,
                                                        unsigned seed = 5, double tol = 1e-8);

struct TransformOptions {
  double xi = std::numeric_limits<double>::quiet_NaN();   // default m + 7
  double eta = std::numeric_limits<double>::quiet_NaN();  // default min(pi / (2L), 2.5)
  int grid = 20;
  double x_max = std::numeric_limits<double>::quiet_NaN();  // default max(14, 2.5 / L)
  int real_n = 0;                                            // default step 0.02
  double y_max = std::numeric_limits<double>::quiet_NaN();  // default 40 ln 2 / L
  int line_n = 4000;
};

// K_Im K_Re g = g on D_eta, K_Re K_Im f = f on C_xi, and the real-cycle
// integral of F(lambda, mu) q^{mu^2/2} Q(-mu-1) F(mu, nu).
std::vector<CheckReport> check_transform_roundtrip(double q, int m, const TransformOptions& opt = {},
                                                   double tol = 1e-5, double realint_tol = 1e-6);

}  // namespace qtrace
