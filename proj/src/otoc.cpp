#include "otoclab/otoc.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "otoclab/fitting.hpp"

namespace otoclab {
namespace {

void require_hermitian(const OperatorMatrix& op, const char* name) {
  const double scale = std::max(1.0, op.is_diagonal() ? op.diagonal_entries().cwiseAbs().maxCoeff()
                                                      : op.dense_entries().cwiseAbs().maxCoeff());
  if (op.hermiticity_residual() > 1e-10 * scale)
    throw std::invalid_argument(std::string("otoc_series: operator ") + name + " is not Hermitian");
}

struct Traces {
  Complex o1;
  Complex o2;
};

// B diagonal with entries b in the basis where A has matrix a.
Traces contract_diagonal(const Matrix& a, const Vector& b) {
  const Eigen::Index n = a.rows();
  Complex o1 = 0.0, o2 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex row2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex prod = a(i, j) * a(j, i);
      o1 += prod * b(i) * b(j);
      row2 += prod;
    }
    o2 += row2 * b(j) * b(j);
  }
  return {o1 / static_cast<double>(n), o2 / static_cast<double>(n)};
}

Traces contract_dense(const Matrix& a, const Matrix& b) {
  const double n = static_cast<double>(a.rows());
  const Matrix ab = a * b;
  const Matrix aa = a * a;
  const Matrix bb = b * b;
  return {ab.cwiseProduct(ab.transpose()).sum() / n, aa.cwiseProduct(bb.transpose()).sum() / n};
}

}  // namespace

OperatorMatrix heisenberg_evolve(const OperatorMatrix& a, const QuantumMap& map, int steps) {
  if (steps < 0) throw std::invalid_argument("heisenberg_evolve: steps must be >= 0");
  if (a.dim() != map.dim()) throw std::invalid_argument("heisenberg_evolve: dimension mismatch");
  if (steps == 0) return a;
  Matrix x = a.to_dense();
  for (int s = 0; s < steps; ++s) x = map.conjugate(x);
  return OperatorMatrix::dense(std::move(x));
}

OtocSeries otoc_series(const Channel& channel, const OperatorMatrix& a, const OperatorMatrix& b, int t_max,
                       const std::string& operator_label) {
  const int n = channel.dim();
  if (a.dim() != n || b.dim() != n) throw std::invalid_argument("otoc_series: dimension mismatch");
  if (t_max < 0) throw std::invalid_argument("otoc_series: t_max must be >= 0");
  require_hermitian(a, "A");
  require_hermitian(b, "B");

  OtocSeries s;
  s.metadata.dim = n;
  s.metadata.epsilon = channel.epsilon();
  s.metadata.operators = operator_label;

  const Matrix b_dense = b.is_diagonal() ? Matrix() : b.dense_entries();
  Matrix at = a.to_dense();
  for (int t = 0; t <= t_max; ++t) {
    if (t > 0) at = channel.step(at);
    Traces tr;
    if (!b.is_diagonal())
      tr = contract_dense(at, b_dense);
    else if (b.basis() == Basis::position)
      tr = contract_diagonal(at, b.diagonal_entries());
    else
      tr = contract_diagonal(position_to_momentum(at), b.diagonal_entries());
    s.t.push_back(t);
    s.o1.push_back(tr.o1);
    s.o2.push_back(tr.o2.real());
    s.c.push_back(-2.0 * (tr.o1 - tr.o2).real());
  }
  return s;
}

double otoc_commutator(const Matrix& a_t, const Matrix& b) {
  const Matrix k = a_t * b - b * a_t;
  return (k * k.adjoint()).trace().real() / static_cast<double>(a_t.rows());
}

AnalyticCatOtoc analytic_cat_otoc(int t, int n) {
  if (t < 0) throw std::invalid_argument("analytic_cat_otoc: t must be >= 0");
  if (n < 2) throw std::invalid_argument("analytic_cat_otoc: N must be >= 2");
  AnalyticCatOtoc r;
  r.t = t;
  r.a_t = cat_matrix_power(t).a_mod(n);
  const double s = std::sin(kPi * static_cast<double>(r.a_t) / n);
  r.c = s * s;
  r.o1 = 0.25 * std::cos(kTwoPi * static_cast<double>(r.a_t) / n);
  r.o2 = 0.25;
  r.approximation = (kPi / n) * (kPi / n) * std::exp(2.0 * cat_lyapunov_exponent() * t);
  return r;
}

double otoc_family_linear(PhaseVector xi, PhaseVector chi, int t, int n, const ClassicalMapSpec& spec) {
  if (spec.kind != MapKind::cat || spec.param1 != 0.0)
    throw std::invalid_argument("otoc_family_linear: only defined for the linear cat map (k = 0)");
  if (t < 0) throw std::invalid_argument("otoc_family_linear: t must be >= 0");
  if (n < 2) throw std::invalid_argument("otoc_family_linear: N must be >= 2");
  const PhaseVector m = cat_matrix_power(t).apply_mod(xi.reduced(n), n);
  const std::int64_t w = symplectic_product(m, chi.reduced(n)) % n;
  const double s = std::sin(kPi * static_cast<double>(w) / n);
  return s * s;
}

LyapunovFit fit_lyapunov_from_otoc(const OtocSeries& series, int t_start, int t_end) {
  if (t_start < 0 || t_end <= t_start || t_end >= static_cast<int>(series.size()))
    throw std::invalid_argument("fit_lyapunov_from_otoc: window outside the series");
  std::vector<double> x, y;
  for (int t = t_start; t <= t_end; ++t) {
    if (!(series.c[t] > 0.0)) throw std::invalid_argument("fit_lyapunov_from_otoc: C(t) must be positive in the window");
    x.push_back(series.t[t]);
    y.push_back(std::log(series.c[t]));
  }
  const auto fit = fit_line(x, y);
  LyapunovFit r;
  r.lambda = fit.slope / 2.0;
  r.r_squared = fit.r_squared;
  r.t_start = t_start;
  r.t_end = t_end;
  if (fit.r_squared < 0.98) {
    std::ostringstream os;
    os << "fit R^2 = " << fit.r_squared << " below 0.98";
    r.warnings.push_back(os.str());
  }
  return r;
}

}  // namespace otoclab
