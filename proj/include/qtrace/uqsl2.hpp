#pragma once

#include "qtrace/qnum.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace qtrace {

// The engine is instantiated for T = double and T = long double; the second
// serves the exchange matrices, whose conjugation cancels entries of size q^{-k^2}.
template <class T>
using MatrixT = Eigen::Matrix<Cplx<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using VectorT = Eigen::Matrix<Cplx<T>, Eigen::Dynamic, 1>;
using Matrix = MatrixT<double>;
using Vector = VectorT<double>;
using Context = QContext<double>;

enum class DualFlag { module, right_dual, left_dual };

// Finite-dimensional U_q(sl2) module on a weight basis. For L_n the basis is
// v_0..v_n with weight n - 2j, F v_j = [j+1] v_{j+1}, E v_j = [n-j+1] v_{j-1}.
template <class T>
struct BasicModule {
  int n = 0;
  Eigen::VectorXi weights;
  MatrixT<T> E, F;
  DualFlag dual_flag = DualFlag::module;

  Eigen::Index dim() const { return weights.size(); }
  MatrixT<T> K(const QContext<T>& ctx, int power = 1) const;  // q^{power h}
  Eigen::Index zero_weight_index() const;
  VectorT<T> basis(Eigen::Index i) const;
};
using FinDimModule = BasicModule<double>;

template <class T>
BasicModule<T> irreducible(const QContext<T>& ctx, int n);
template <class T>
BasicModule<T> right_dual(const QContext<T>& ctx, const BasicModule<T>& V);  // pi(S(a))^T
template <class T>
BasicModule<T> left_dual(const QContext<T>& ctx, const BasicModule<T>& V);   // pi(S^-1(a))^T

// max |EF - FE - [h]| over the module
double relation_defect(const Context& ctx, const FinDimModule& V);

// Coproduct of a generator ('E', 'F' or 'K') on U (x) V; opposite gives Delta^op.
Matrix coproduct(const Context& ctx, const FinDimModule& U, const FinDimModule& V, char gen,
                 bool opposite = false);

// Verma module M_mu truncated at level K, basis f^k x_mu.
struct TruncatedVerma {
  cdouble mu;
  int K;
  // E f^k x = e_coeff(k) f^{k-1} x
  cdouble e_coeff(const Context& ctx, int k) const;
  Matrix E(const Context& ctx) const;
  Matrix F() const;
};

// Phi^w_mu x_mu = sum_k f^k x_{mu - mu_w} (x) c_k, c_0 = w.
template <class T>
struct BasicIntertwiner {
  Cplx<T> mu;
  int weight_w = 0;
  std::vector<VectorT<T>> c;
};
using IntertwinerCoeffs = BasicIntertwiner<double>;

template <class T>
BasicIntertwiner<T> solve_intertwiner(const QContext<T>& ctx, const BasicModule<T>& W,
                                      const VectorT<T>& w, Cplx<T> mu, int K);
// V = L_{2m}, w the zero-weight vector v_m.
IntertwinerCoeffs solve_intertwiner(const Context& ctx, cdouble mu, int m, int K);

// Largest |Delta(E) Phi x_mu| coefficient relative to the term magnitudes.
double singularity_defect(const Context& ctx, const FinDimModule& W, const IntertwinerCoeffs& ic);

// Diagonal trace coefficients d_0..d_levels of Phi^w_mu on M_mu: the component
// of Phi(f^k x) along f^k x (x) w, for w of weight zero. If quotient >= 0 the
// computation runs in L_quotient = M_mu / M_{s.mu}.
std::vector<cdouble> trace_coefficients(const Context& ctx, const FinDimModule& W, cdouble mu,
                                        int levels, int quotient = -1);

struct SeriesValue {
  cdouble value;
  double tail_estimate;
};

int default_truncation(cdouble mu, int m);

// Psi(lambda, mu) = Tr|_{M_mu}(Phi q^{2 lambda}) as a series in q^{-2 lambda}.
SeriesValue trace_series(const Context& ctx, cdouble lambda, cdouble mu, int m, int K = -1);
cdouble trace_series_psi(const Context& ctx, cdouble lambda, cdouble mu, int m, int K = -1);

// Coefficients d_0..d_nu of Psi_nu(lambda) = sum_k q^{lambda(nu - 2k)} d_k on L_nu.
std::vector<cdouble> findim_trace_coefficients(const Context& ctx, const FinDimModule& W, int nu);
cdouble findim_trace_psi(const Context& ctx, int nu, cdouble lambda, int m);

// J_{WV}(mu) on W (x) V, index iw * dim V + iv.
template <class T>
MatrixT<T> fusion_matrix(const QContext<T>& ctx, const BasicModule<T>& W, const BasicModule<T>& V,
                         Cplx<T> mu);

// (Q_V(nu) v, v_*) on V[0], V = L_{2m}.
cdouble q_operator_oracle(const Context& ctx, int m, cdouble nu);

// A_{s,V}(mu) on V[0], V = L_{2m} or one of its duals, mu dominant integral.
cdouble dynamical_weyl(const Context& ctx, int m, int mu, DualFlag which = DualFlag::module);

// q^{h (x) h / 2} sum_n q^{n(n-1)/2} (q - q^-1)^n / [n]! E^n (x) F^n
template <class T>
MatrixT<T> r_matrix(const QContext<T>& ctx, const BasicModule<T>& U, const BasicModule<T>& V);

// Permutation A (x) B -> B (x) A.
Eigen::MatrixXd flip(Eigen::Index dim_a, Eigen::Index dim_b);

// R_{UV}(lambda) = J_{UV}(lambda)^-1 R^{21}_{VU} J^{21}_{VU}(lambda)
template <class T>
MatrixT<T> exchange_matrix(const QContext<T>& ctx, const BasicModule<T>& U, const BasicModule<T>& V,
                           Cplx<T> lambda);

// a_nu(lambda) = Tr|_{U[nu]} R_{UV}(-lambda - 1) on V[0], U = L_2; index 0,1,2 <-> nu = 2,0,-2.
// Computed in long double.
struct MRCoefficients {
  std::array<cdouble, 3> a;
  cdouble at(int nu) const { return a[(2 - nu) / 2]; }
};
MRCoefficients mr_operator_coeffs(const Context& ctx, int m, cdouble lambda,
                                  DualFlag which = DualFlag::module);

}  // namespace qtrace
