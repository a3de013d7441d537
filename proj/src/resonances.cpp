#include "otoclab/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "otoclab/fitting.hpp"

namespace otoclab {
namespace {

Complex hs_inner(const Matrix& a, const Matrix& b) { return a.conjugate().cwiseProduct(b).sum(); }

void remove_trace(Matrix& a) {
  const Complex mean = a.trace() / static_cast<double>(a.rows());
  a.diagonal().array() -= mean;
}

std::vector<int> order_by_modulus(const Vector& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return std::abs(values(a)) > std::abs(values(b)); });
  return idx;
}

void mark_near_degenerate(ResonanceSpectrum& s, int lead) {
  s.near_degenerate.clear();
  if (lead < 0 || lead >= static_cast<int>(s.alphas.size())) return;
  const double top = std::abs(s.alphas[lead]);
  for (int i = lead; i < static_cast<int>(s.alphas.size()); ++i)
    if (std::abs(s.alphas[i]) >= 0.99 * top) s.near_degenerate.push_back(i);
}

}  // namespace

std::string to_string(ResonanceMethod method) {
  switch (method) {
    case ResonanceMethod::dense: return "dense";
    case ResonanceMethod::krylov: return "krylov";
    case ResonanceMethod::tail_fit: return "tail_fit";
  }
  return "unknown";
}

Matrix dense_superoperator(const Channel& channel) {
  const int n = channel.dim();
  if (n > 24) throw std::invalid_argument("dense_superoperator: N > 24 is not supported");
  const int n2 = n * n;
  Matrix s(n2, n2);
  Matrix unit = Matrix::Zero(n, n);
  for (int j = 0; j < n2; ++j) {
    unit(j % n, j / n) = 1.0;
    const Matrix out = channel.step(unit);
    s.col(j) = Eigen::Map<const Vector>(out.data(), n2);
    unit(j % n, j / n) = 0.0;
  }
  return s;
}

ResonanceSpectrum full_spectrum(const Matrix& superoperator, double epsilon) {
  const Eigen::Index n2 = superoperator.rows();
  if (n2 != superoperator.cols()) throw std::invalid_argument("full_spectrum: matrix must be square");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (static_cast<Eigen::Index>(n) * n != n2) throw std::invalid_argument("full_spectrum: size is not N^2");

  Eigen::ComplexEigenSolver<Matrix> solver(superoperator, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("full_spectrum: eigensolver failed");

  const auto idx = order_by_modulus(solver.eigenvalues());
  ResonanceSpectrum s;
  s.method = ResonanceMethod::dense;
  s.dim = n;
  s.epsilon = epsilon;
  s.right.resize(n2, n2);
  for (Eigen::Index k = 0; k < n2; ++k) {
    s.alphas.push_back(solver.eigenvalues()(idx[k]));
    s.right.col(k) = solver.eigenvectors().col(idx[k]).normalized();
  }
  // rows of R^{-1} are the dual basis: Tr(L_i^dagger R_j) = delta_ij
  s.left = s.right.partialPivLu().inverse().adjoint();

  for (Eigen::Index k = 0; k < n2; ++k) {
    const double r = (superoperator * s.right.col(k) - s.alphas[k] * s.right.col(k)).norm();
    s.residuals.push_back(r);
    s.converged.push_back(true);
  }
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n2; ++i)
    for (Eigen::Index j = i + 1; j < n2; ++j) gap = std::min(gap, std::abs(s.alphas[i] - s.alphas[j]));
  if (gap < 1e-8) {
    s.degenerate = true;
    s.warnings.push_back("spectrum is degenerate; the spectral decomposition is not unique");
  }
  mark_near_degenerate(s, leading_nontrivial(s));
  return s;
}

int leading_nontrivial(const ResonanceSpectrum& spectrum) {
  if (spectrum.method != ResonanceMethod::dense || spectrum.right.size() == 0) return 0;
  // The identity direction has the largest trace overlap among unit eigenvalues.
  const int n = spectrum.dim;
  int identity = -1;
  double best = 0.0;
  for (int k = 0; k < static_cast<int>(spectrum.alphas.size()); ++k) {
    if (std::abs(spectrum.alphas[k] - 1.0) > 1e-8) break;
    Complex tr = 0.0;
    for (int q = 0; q < n; ++q) tr += spectrum.right(q + q * n, k);
    if (std::abs(tr) > best) {
      best = std::abs(tr);
      identity = k;
    }
  }
  if (identity != 0) return 0;
  return spectrum.alphas.size() > 1 ? 1 : 0;
}

ResonanceSpectrum krylov_leading(const Channel& channel, const Matrix& seed, const KrylovOptions& options) {
  const int n = channel.dim();
  if (seed.rows() != n || seed.cols() != n) throw std::invalid_argument("krylov_leading: seed dimension mismatch");
  if (options.n_wanted < 1) throw std::invalid_argument("krylov_leading: n_wanted must be >= 1");
  if (options.depth < options.n_wanted + 2) throw std::invalid_argument("krylov_leading: depth must be >= n_wanted + 2");
  if (std::abs(seed.trace()) > 1e-10 * std::max(1.0, seed.norm()))
    throw std::invalid_argument("krylov_leading: seed must be traceless");

  const int m = options.depth;
  std::vector<Matrix> basis;
  basis.reserve(m + 1);
  Matrix v = seed;
  remove_trace(v);
  const double seed_norm = v.norm();
  if (seed_norm == 0.0) throw std::invalid_argument("krylov_leading: seed is zero");
  basis.push_back(v / seed_norm);

  Matrix h = Matrix::Zero(m + 1, m);
  int built = 0;
  for (int j = 0; j < m; ++j) {
    Matrix w = channel.step(basis[j]);
    remove_trace(w);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const Complex c = hs_inner(basis[i], w);
        h(i, j) += c;
        w -= c * basis[i];
      }
    }
    const double beta = w.norm();
    h(j + 1, j) = beta;
    built = j + 1;
    if (beta < 1e-13) break;
    if (j + 1 < m) basis.push_back(w / beta);
  }

  const Matrix hm = h.topLeftCorner(built, built);
  Eigen::ComplexEigenSolver<Matrix> solver(hm, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("krylov_leading: Ritz eigensolver failed");
  const double beta = std::abs(h(built, built - 1));
  const auto idx = order_by_modulus(solver.eigenvalues());

  ResonanceSpectrum s;
  s.method = ResonanceMethod::krylov;
  s.dim = n;
  s.epsilon = channel.epsilon();
  const int keep = std::min<int>(options.n_wanted, built);
  for (int k = 0; k < keep; ++k) {
    const Vector y = solver.eigenvectors().col(idx[k]).normalized();
    const double r = beta * std::abs(y(built - 1));
    s.alphas.push_back(solver.eigenvalues()(idx[k]));
    s.residuals.push_back(r);
    s.converged.push_back(r < options.accept_residual);
    if (r > options.fail_residual) {
      std::ostringstream os;
      os << "Ritz value " << k << " not converged (residual " << r << ")";
      s.warnings.push_back(os.str());
    }
  }
  mark_near_degenerate(s, 0);
  if (s.near_degenerate.size() > 1) s.warnings.push_back("leading moduli are within 1% of each other");
  return s;
}

Matrix random_traceless_hermitian(int n, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  Matrix h = (a + a.adjoint()) / 2.0;
  remove_trace(h);
  return h / h.norm();
}

TailFit fit_tail_rate(const OtocSeries& series, int t_start, int t_end, bool envelope) {
  const int size = static_cast<int>(series.size());
  if (t_start < 0 || t_end >= size || t_end - t_start + 1 < 4)
    throw std::invalid_argument("fit_tail_rate: window must lie inside the series and hold at least 4 points");
  TailFit r;
  r.t_start = t_start;
  r.t_end = t_end;
  auto mag = [&](int t) { return std::abs(series.o1[t]); };

  std::vector<int> picks;
  if (envelope) {
    for (int t = t_start; t <= t_end; ++t) {
      const bool left = t == 0 || mag(t) >= mag(t - 1);
      const bool right = t + 1 >= size || mag(t) >= mag(t + 1);
      if (left && right) picks.push_back(t);
    }
    if (picks.size() < 2) {
      r.warnings.push_back("fewer than two local maxima in the window; fitting all points");
      picks.clear();
    }
  }
  if (picks.empty())
    for (int t = t_start; t <= t_end; ++t) picks.push_back(t);

  std::vector<double> x, y;
  for (int t : picks) {
    if (mag(t) < 1e-13) r.hit_floor = true;
    if (mag(t) <= 0.0) continue;
    x.push_back(series.t[t]);
    y.push_back(std::log(mag(t)));
  }
  if (r.hit_floor) r.warnings.push_back("|O1| reaches the numerical floor (< 1e-13) inside the window");
  if (x.size() < 2) throw std::invalid_argument("fit_tail_rate: not enough nonzero points");
  const auto fit = fit_line(x, y);
  r.alpha = std::exp(fit.slope / 2.0);
  r.r_squared = fit.r_squared;
  r.points = fit.points;
  return r;
}

Vector expansion_coefficients(const ResonanceSpectrum& spectrum, const Matrix& a) {
  if (spectrum.method != ResonanceMethod::dense || spectrum.left.size() == 0)
    throw std::invalid_argument("expansion_coefficients: needs a dense spectrum");
  const Eigen::Index n2 = a.size();
  if (n2 != spectrum.left.rows()) throw std::invalid_argument("expansion_coefficients: dimension mismatch");
  return spectrum.left.adjoint() * Eigen::Map<const Vector>(a.data(), n2);
}

Complex spectral_o1_prediction(const ResonanceSpectrum& spectrum, const Matrix& a, const Matrix& b, int t,
                               int n_terms) {
  if (t < 0) throw std::invalid_argument("spectral_o1_prediction: t must be >= 0");
  const Vector x = expansion_coefficients(spectrum, a);
  const int n = spectrum.dim;
  const int total = static_cast<int>(spectrum.alphas.size());
  const int lead = leading_nontrivial(spectrum);
  const int last = n_terms < 0 ? total : std::min(total, lead + n_terms);

  Vector vec_at = Vector::Zero(static_cast<Eigen::Index>(n) * n);
  for (int k = 0; k < last; ++k) {
    if (k < lead && n_terms >= 0 && std::abs(spectrum.alphas[k] - 1.0) > 1e-8) continue;
    vec_at += x(k) * std::pow(spectrum.alphas[k], t) * spectrum.right.col(k);
  }
  const Matrix at = Eigen::Map<const Matrix>(vec_at.data(), n, n);
  const Matrix ab = at * b;
  return ab.cwiseProduct(ab.transpose()).sum() / static_cast<double>(n);
}

}  // namespace otoclab
