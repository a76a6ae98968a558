#include "qtrace/uqsl2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtrace {

namespace {

constexpr double kPivotFloor = 1e-10;
constexpr double kResidualTol = 1e-10;

template <class T>
Cplx<T> qp(const QContext<T>& ctx, Cplx<T> x) {
  return qpow(ctx, x);
}

template <class T>
MatrixT<T> kron(const MatrixT<T>& a, const MatrixT<T>& b) {
  MatrixT<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class T>
VectorT<T> kron(const VectorT<T>& a, const VectorT<T>& b) {
  VectorT<T> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

template <class T>
int homogeneous_weight(const BasicModule<T>& W, const VectorT<T>& w) {
  int weight = 0;
  bool seen = false;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) == Cplx<T>(0)) continue;
    if (seen && W.weights(i) != weight) throw std::invalid_argument("vector is not homogeneous");
    weight = W.weights(i);
    seen = true;
  }
  if (!seen) throw std::invalid_argument("zero vector has no weight");
  return weight;
}

template <class T>
BasicModule<T> select_module(const QContext<T>& ctx, int m, DualFlag which) {
  BasicModule<T> V = irreducible(ctx, 2 * m);
  if (which == DualFlag::right_dual) return right_dual(ctx, V);
  if (which == DualFlag::left_dual) return left_dual(ctx, V);
  return V;
}

}  // namespace

template <class T>
MatrixT<T> BasicModule<T>::K(const QContext<T>& ctx, int power) const {
  VectorT<T> d(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) d(i) = qpow(ctx, T(power * weights(i)));
  return d.asDiagonal();
}

template <class T>
Eigen::Index BasicModule<T>::zero_weight_index() const {
  for (Eigen::Index i = 0; i < dim(); ++i)
    if (weights(i) == 0) return i;
  throw std::invalid_argument("module has no zero weight");
}

template <class T>
VectorT<T> BasicModule<T>::basis(Eigen::Index i) const {
  VectorT<T> v = VectorT<T>::Zero(dim());
  v(i) = 1;
  return v;
}

template <class T>
BasicModule<T> irreducible(const QContext<T>& ctx, int n) {
  if (n < 0) throw std::invalid_argument("highest weight must be >= 0");
  BasicModule<T> V;
  V.n = n;
  V.weights.resize(n + 1);
  V.E = MatrixT<T>::Zero(n + 1, n + 1);
  V.F = MatrixT<T>::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    V.weights(j) = n - 2 * j;
    if (j + 1 <= n) V.F(j + 1, j) = qint(ctx, j + 1);
    if (j >= 1) V.E(j - 1, j) = qint(ctx, n - j + 1);
  }
  return V;
}

template <class T>
BasicModule<T> right_dual(const QContext<T>& ctx, const BasicModule<T>& V) {
  BasicModule<T> D;
  D.n = V.n;
  D.weights = -V.weights;
  D.E = (-V.E * V.K(ctx, -1)).transpose();
  D.F = (-V.K(ctx) * V.F).transpose();
  D.dual_flag = DualFlag::right_dual;
  return D;
}

template <class T>
BasicModule<T> left_dual(const QContext<T>& ctx, const BasicModule<T>& V) {
  BasicModule<T> D;
  D.n = V.n;
  D.weights = -V.weights;
  D.E = (-V.K(ctx, -1) * V.E).transpose();
  D.F = (-V.F * V.K(ctx)).transpose();
  D.dual_flag = DualFlag::left_dual;
  return D;
}

double relation_defect(const Context& ctx, const FinDimModule& V) {
  const Matrix h = (V.K(ctx) - V.K(ctx, -1)) / (ctx.q - 1 / ctx.q);
  return (V.E * V.F - V.F * V.E - h).cwiseAbs().maxCoeff();
}

Matrix coproduct(const Context& ctx, const FinDimModule& U, const FinDimModule& V, char gen,
                 bool opposite) {
  const Matrix IU = Matrix::Identity(U.dim(), U.dim());
  const Matrix IV = Matrix::Identity(V.dim(), V.dim());
  switch (gen) {
    case 'E':
      return opposite ? Matrix(kron(U.K(ctx), V.E) + kron(U.E, IV))
                      : Matrix(kron(U.E, V.K(ctx)) + kron(IU, V.E));
    case 'F':
      return opposite ? Matrix(kron(IU, V.F) + kron(U.F, V.K(ctx, -1)))
                      : Matrix(kron(U.F, IV) + kron(U.K(ctx, -1), V.F));
    case 'K':
      return kron(U.K(ctx), V.K(ctx));
    default:
      throw std::invalid_argument(std::string("unknown generator ") + gen);
  }
}

cdouble TruncatedVerma::e_coeff(const Context& ctx, int k) const {
  return qint(ctx, k) * qint(ctx, mu - cdouble(k - 1));
}

Matrix TruncatedVerma::E(const Context& ctx) const {
  Matrix e = Matrix::Zero(K + 1, K + 1);
  for (int k = 1; k <= K; ++k) e(k - 1, k) = e_coeff(ctx, k);
  return e;
}

Matrix TruncatedVerma::F() const {
  Matrix f = Matrix::Zero(K + 1, K + 1);
  for (int k = 0; k < K; ++k) f(k + 1, k) = 1;
  return f;
}

template <class T>
BasicIntertwiner<T> solve_intertwiner(const QContext<T>& ctx, const BasicModule<T>& W,
                                      const VectorT<T>& w, Cplx<T> mu, int K) {
  BasicIntertwiner<T> ic;
  ic.mu = mu;
  ic.weight_w = homogeneous_weight(W, w);
  const Cplx<T> mup = mu - T(ic.weight_w);
  ic.c.push_back(w);
  for (int k = 1; k <= K; ++k) {
    const VectorT<T> Ec = W.E * ic.c.back();
    if (Ec.cwiseAbs().maxCoeff() == T(0)) break;
    const Cplx<T> pivot = qint(ctx, Cplx<T>(mup - T(k - 1)));
    if (std::abs(pivot) < T(kPivotFloor))
      throw ResonantWeight("resonant weight at level " + std::to_string(k));
    ic.c.push_back(-Ec / (qint(ctx, k) * pivot * qpow(ctx, T(ic.weight_w + 2 * k))));
  }
  return ic;
}

IntertwinerCoeffs solve_intertwiner(const Context& ctx, cdouble mu, int m, int K) {
  const FinDimModule V = irreducible(ctx, 2 * m);
  return solve_intertwiner(ctx, V, V.basis(m), mu, K);
}

double singularity_defect(const Context& ctx, const FinDimModule& W, const IntertwinerCoeffs& ic) {
  const cdouble mup = ic.mu - double(ic.weight_w);
  double worst = 0;
  const auto n = static_cast<int>(ic.c.size());
  for (int k = 1; k <= n; ++k) {
    const Vector lower = W.E * ic.c[k - 1];
    Vector from_verma = Vector::Zero(W.dim());
    if (k < n) {
      from_verma = qint(ctx, k) * qint(ctx, mup - cdouble(k - 1)) *
                   qpow(ctx, double(ic.weight_w + 2 * k)) * ic.c[k];
    }
    const double scale = std::max({lower.norm(), from_verma.norm(), 1e-300});
    worst = std::max(worst, (lower + from_verma).norm() / scale);
  }
  return worst;
}

namespace {

std::vector<cdouble> run_trace(const Context& ctx, const FinDimModule& W, cdouble mu, int levels,
                               int quotient, double* residual) {
  const Eigen::Index z = W.zero_weight_index();
  const IntertwinerCoeffs ic = solve_intertwiner(ctx, W, W.basis(z), mu, int(W.dim()));
  // Component i of the state sits on f^{a_i} x with a_i = level + weight_i / 2.
  Vector state = Vector::Zero(W.dim());
  for (const auto& c : ic.c) state += c;
  auto depth = [&](int level, Eigen::Index i) { return level + W.weights(i) / 2; };
  auto project = [&](int level) {
    if (quotient < 0) return;
    for (Eigen::Index i = 0; i < W.dim(); ++i)
      if (depth(level, i) > quotient) state(i) = 0;
  };
  project(0);
  double scale = state.cwiseAbs().maxCoeff();
  std::vector<cdouble> d;
  d.reserve(levels + 1);
  Vector scaled(W.dim());
  for (int level = 0; level <= levels; ++level) {
    d.push_back(state(z));
    if (level == levels) break;
    for (Eigen::Index i = 0; i < W.dim(); ++i)
      scaled(i) = qp(ctx, -(mu - 2.0 * depth(level, i))) * state(i);
    state += W.F * scaled;
    scale = std::max(scale, state.cwiseAbs().maxCoeff());
    project(level + 1);
  }
  if (residual) *residual = state.cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
  return d;
}

}  // namespace

std::vector<cdouble> trace_coefficients(const Context& ctx, const FinDimModule& W, cdouble mu,
                                        int levels, int quotient) {
  return run_trace(ctx, W, mu, levels, quotient, nullptr);
}

int default_truncation(cdouble mu, int m) {
  return std::max(300, int(std::ceil(std::abs(mu))) + m + 10);
}

SeriesValue trace_series(const Context& ctx, cdouble lambda, cdouble mu, int m, int K) {
  if (lambda.real() >= 0) throw Divergent("trace series needs Re lambda < 0");
  if (K < 0) K = default_truncation(mu, m);
  const FinDimModule V = irreducible(ctx, 2 * m);
  const std::vector<cdouble> d = trace_coefficients(ctx, V, mu, K);
  cdouble s = 0;
  for (int k = K; k >= 0; --k) s += qp(ctx, lambda * (mu - 2.0 * k)) * d[k];
  const double r = std::exp(2 * ctx.L * lambda.real());
  const double last = std::abs(qp(ctx, lambda * (mu - 2.0 * K)) * d[K]);
  return {s, last * r / (1 - r)};
}

cdouble trace_series_psi(const Context& ctx, cdouble lambda, cdouble mu, int m, int K) {
  return trace_series(ctx, lambda, mu, m, K).value;
}

std::vector<cdouble> findim_trace_coefficients(const Context& ctx, const FinDimModule& W, int nu) {
  if (nu < 0) throw std::invalid_argument("nu must be dominant");
  std::vector<cdouble> d;
  double residual = 0;
  try {
    // One level past the top: Phi(f^{nu+1} x) has to vanish inside L_nu (x) W.
    d = run_trace(ctx, W, cdouble(nu), nu + 1, nu, &residual);
  } catch (const ResonantWeight& e) {
    throw NoIntertwiner(std::string("no intertwiner L_nu -> L_nu (x) V: ") + e.what());
  }
  if (residual > kResidualTol) throw NoIntertwiner("projected intertwiner is inconsistent");
  d.pop_back();
  return d;
}

cdouble findim_trace_psi(const Context& ctx, int nu, cdouble lambda, int m) {
  const std::vector<cdouble> d = findim_trace_coefficients(ctx, irreducible(ctx, 2 * m), nu);
  cdouble s = 0;
  for (int k = 0; k <= nu; ++k) s += qp(ctx, lambda * double(nu - 2 * k)) * d[k];
  return s;
}

template <class T>
MatrixT<T> fusion_matrix(const QContext<T>& ctx, const BasicModule<T>& W, const BasicModule<T>& V,
                         Cplx<T> mu) {
  const Eigen::Index dW = W.dim(), dV = V.dim();
  MatrixT<T> J = MatrixT<T>::Zero(dW * dV, dW * dV);
  for (Eigen::Index iv = 0; iv < dV; ++iv) {
    const BasicIntertwiner<T> ic = solve_intertwiner(ctx, V, V.basis(iv), mu, int(dV));
    for (Eigen::Index iw = 0; iw < dW; ++iw) {
      const Cplx<T> shift = mu - T(V.weights(iv)) - T(W.weights(iw));
      VectorT<T> Fk = W.basis(iw);
      VectorT<T> col = VectorT<T>::Zero(dW * dV);
      for (std::size_t k = 0; k < ic.c.size(); ++k) {
        col += qp(ctx, Cplx<T>(-T(k) * shift)) * kron(Fk, ic.c[k]);
        Fk = W.F * Fk;
      }
      J.col(iw * dV + iv) = col;
    }
  }
  return J;
}

cdouble q_operator_oracle(const Context& ctx, int m, cdouble nu) {
  const FinDimModule V = irreducible(ctx, 2 * m);
  const FinDimModule Vs = right_dual(ctx, V);
  const Matrix J = fusion_matrix(ctx, Vs, V, nu);
  const Eigen::Index d = V.dim(), z = V.zero_weight_index();
  const Vector col = J.col(z * d + z);
  cdouble s = 0;
  for (Eigen::Index i = 0; i < d; ++i) s += col(i * d + i);
  return s;
}

cdouble dynamical_weyl(const Context& ctx, int m, int mu, DualFlag which) {
  if (mu < m) throw TruncationTooSmall("dynamical Weyl oracle needs dominant mu >= m");
  const FinDimModule V = select_module(ctx, m, which);
  // x_{s.mu} = f^{mu+1} x / [mu+1]!, and the factorials cancel in the ratio.
  return trace_coefficients(ctx, V, cdouble(mu), mu + 1).back();
}

template <class T>
MatrixT<T> r_matrix(const QContext<T>& ctx, const BasicModule<T>& U, const BasicModule<T>& V) {
  const Eigen::Index dU = U.dim(), dV = V.dim();
  VectorT<T> h(dU * dV);
  for (Eigen::Index i = 0; i < dU; ++i)
    for (Eigen::Index j = 0; j < dV; ++j)
      h(i * dV + j) = qpow(ctx, T(U.weights(i) * V.weights(j)) / 2);
  MatrixT<T> S = MatrixT<T>::Zero(dU * dV, dU * dV);
  MatrixT<T> En = MatrixT<T>::Identity(dU, dU), Fn = MatrixT<T>::Identity(dV, dV);
  const int top = int(std::max(dU, dV));
  for (int n = 0; n <= top; ++n) {
    const T c = qpow(ctx, T(n * (n - 1)) / 2) * std::pow(ctx.q - 1 / ctx.q, n) / qfact(ctx, n);
    S += c * kron(En, Fn);
    En = U.E * En;
    Fn = V.F * Fn;
  }
  return h.asDiagonal() * S;
}

Eigen::MatrixXd flip(Eigen::Index dim_a, Eigen::Index dim_b) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dim_a * dim_b, dim_a * dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a)
    for (Eigen::Index b = 0; b < dim_b; ++b) P(b * dim_a + a, a * dim_b + b) = 1;
  return P;
}

template <class T>
MatrixT<T> exchange_matrix(const QContext<T>& ctx, const BasicModule<T>& U, const BasicModule<T>& V,
                           Cplx<T> lambda) {
  const MatrixT<T> P = flip(V.dim(), U.dim()).template cast<Cplx<T>>();
  const MatrixT<T> R21 = P * r_matrix(ctx, V, U) * P.transpose();
  const MatrixT<T> J21 = P * fusion_matrix(ctx, V, U, lambda) * P.transpose();
  // J is unit lower triangular in the index iu * dim V + iv: the F^k terms move k levels down in U.
  return fusion_matrix(ctx, U, V, lambda).template triangularView<Eigen::UnitLower>().solve(R21 * J21);
}

MRCoefficients mr_operator_coeffs(const Context& ctx, int m, cdouble lambda, DualFlag which) {
  using T = long double;
  const QContext<T> c = QContext<T>::make(T(ctx.q), ctx.theta_truncation);
  const BasicModule<T> U = irreducible(c, 2);
  const BasicModule<T> V = select_module(c, m, which);
  const MatrixT<T> Rx = exchange_matrix(c, U, V, Cplx<T>(-Cplx<T>(lambda) - T(1)));
  const Eigen::Index dV = V.dim(), z = V.zero_weight_index();
  MRCoefficients out{};
  for (Eigen::Index iu = 0; iu < U.dim(); ++iu) {
    const Cplx<T> d = Rx(iu * dV + z, iu * dV + z);
    out.a[(2 - U.weights(iu)) / 2] += cdouble(double(d.real()), double(d.imag()));
  }
  return out;
}

#define QTRACE_INSTANTIATE(T)                                                                      \
  template struct BasicModule<T>;                                                                  \
  template BasicModule<T> irreducible(const QContext<T>&, int);                                    \
  template BasicModule<T> right_dual(const QContext<T>&, const BasicModule<T>&);                   \
  template BasicModule<T> left_dual(const QContext<T>&, const BasicModule<T>&);                    \
  template BasicIntertwiner<T> solve_intertwiner(const QContext<T>&, const BasicModule<T>&,        \
                                                 const VectorT<T>&, Cplx<T>, int);                 \
  template MatrixT<T> fusion_matrix(const QContext<T>&, const BasicModule<T>&,                     \
                                    const BasicModule<T>&, Cplx<T>);                               \
  template MatrixT<T> r_matrix(const QContext<T>&, const BasicModule<T>&, const BasicModule<T>&);  \
  template MatrixT<T> exchange_matrix(const QContext<T>&, const BasicModule<T>&,                   \
                                      const BasicModule<T>&, Cplx<T>);

QTRACE_INSTANTIATE(double)
QTRACE_INSTANTIATE(long double)

}  // namespace qtrace
