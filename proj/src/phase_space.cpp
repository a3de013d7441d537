#include "otoclab/phase_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "otoclab/dft.hpp"

namespace otoclab {
namespace {

std::int64_t floor_mod(std::int64_t k, std::int64_t m) {
  std::int64_t r = k % m;
  return r < 0 ? r + m : r;
}

// tau^m for m = 0..2N-1, exact at quarter turns.
std::vector<Complex> tau_table(int n) {
  std::vector<Complex> table(2 * static_cast<std::size_t>(n));
  for (int m = 0; m < 2 * n; ++m) {
    if ((2 * m) % n == 0) {
      static constexpr Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      table[m] = quarter[(2 * m) / n];
    } else {
      table[m] = std::polar(1.0, kPi * m / n);
    }
  }
  return table;
}

Matrix circulant(const Vector& c) {
  const auto n = c.size();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = c((i - j + n) % n);
  return out;
}

}  // namespace

TorusSpace::TorusSpace(int dim) : dim_(dim) {
  if (dim < 2) throw std::invalid_argument("torus dimension must be >= 2, got " + std::to_string(dim));
}

Complex TorusSpace::tau() const { return tau_power(1); }

Complex TorusSpace::tau_power(std::int64_t k) const {
  const std::int64_t m = floor_mod(k, 2 * static_cast<std::int64_t>(dim_));
  if ((2 * m) % dim_ == 0) {
    static constexpr Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[(2 * m) / dim_];
  }
  return std::polar(1.0, kPi * static_cast<double>(m) / dim_);
}

Complex TorusSpace::root_of_unity(std::int64_t k) const { return tau_power(2 * floor_mod(k, dim_)); }

double TorusSpace::h_eff() const { return 1.0 / (kTwoPi * dim_); }

int TorusSpace::wrap(std::int64_t k) const { return static_cast<int>(floor_mod(k, dim_)); }

PhaseVector PhaseVector::reduced(int n) const { return {floor_mod(q, n), floor_mod(p, n)}; }

std::int64_t symplectic_product(const PhaseVector& xi, const PhaseVector& chi) {
  return xi.p * chi.q - xi.q * chi.p;
}

OperatorMatrix OperatorMatrix::dense(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 2)
    throw std::invalid_argument("operator matrix must be square with dimension >= 2");
  OperatorMatrix op;
  op.dense_ = std::move(entries);
  return op;
}

OperatorMatrix OperatorMatrix::diagonal(Basis basis, Vector entries) {
  if (entries.size() < 2) throw std::invalid_argument("operator dimension must be >= 2");
  OperatorMatrix op;
  op.diagonal_ = true;
  op.basis_ = basis;
  op.diag_ = std::move(entries);
  return op;
}

int OperatorMatrix::dim() const {
  return static_cast<int>(diagonal_ ? diag_.size() : dense_.rows());
}

const Vector& OperatorMatrix::diagonal_entries() const {
  if (!diagonal_) throw std::logic_error("operator is stored densely");
  return diag_;
}

const Matrix& OperatorMatrix::dense_entries() const {
  if (diagonal_) throw std::logic_error("operator is stored as a diagonal");
  return dense_;
}

Matrix OperatorMatrix::to_dense() const {
  if (!diagonal_) return dense_;
  if (basis_ == Basis::position) return diag_.asDiagonal();
  // F D F^dagger is circulant with first column ifft(d) / N.
  Vector c = diag_;
  dft_plans(dim()).vector(c.data(), DftSign::backward);
  c /= static_cast<double>(dim());
  return circulant(c);
}

Matrix OperatorMatrix::to_momentum_dense() const {
  if (!diagonal_) return position_to_momentum(dense_);
  if (basis_ == Basis::momentum) return diag_.asDiagonal();
  Vector c = diag_;
  dft_plans(dim()).vector(c.data(), DftSign::forward);
  c /= static_cast<double>(dim());
  return circulant(c);
}

double OperatorMatrix::hermiticity_residual() const {
  if (diagonal_) return (diag_ - diag_.conjugate()).cwiseAbs().maxCoeff();
  return (dense_ - dense_.adjoint()).cwiseAbs().maxCoeff();
}

double OperatorMatrix::unitarity_residual() const {
  if (diagonal_) return (diag_.cwiseAbs2().array() - 1.0).abs().maxCoeff();
  const Matrix gram = dense_.adjoint() * dense_;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Complex OperatorMatrix::trace() const { return diagonal_ ? diag_.sum() : dense_.trace(); }

Matrix position_to_momentum(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Matrix out = a;
  const auto& plans = dft_plans(n);
  plans.columns(out.data(), DftSign::forward);
  plans.rows(out.data(), DftSign::backward);
  out /= static_cast<double>(n);
  return out;
}

Matrix momentum_to_position(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Matrix out = a;
  const auto& plans = dft_plans(n);
  plans.columns(out.data(), DftSign::backward);
  plans.rows(out.data(), DftSign::forward);
  out /= static_cast<double>(n);
  return out;
}

OperatorMatrix shift_v(const TorusSpace& space) {
  // V|p> = exp(-2 pi i p / N)|p>
  const int n = space.dim();
  Vector d(n);
  for (int p = 0; p < n; ++p) d(p) = space.root_of_unity(-p);
  return OperatorMatrix::diagonal(Basis::momentum, std::move(d));
}

OperatorMatrix clock_u(const TorusSpace& space) {
  const int n = space.dim();
  Vector d(n);
  for (int q = 0; q < n; ++q) d(q) = space.root_of_unity(q);
  return OperatorMatrix::diagonal(Basis::position, std::move(d));
}

MonomialTranslation translation_monomial(const TorusSpace& space, PhaseVector xi) {
  const int n = space.dim();
  xi = xi.reduced(n);
  MonomialTranslation t;
  t.shift = static_cast<int>(xi.q);
  t.phase.resize(n);
  for (int q = 0; q < n; ++q) t.phase(q) = space.tau_power(xi.q * xi.p + 2 * xi.p * q);
  return t;
}

OperatorMatrix translation(const TorusSpace& space, PhaseVector xi) {
  const int n = space.dim();
  const auto mono = translation_monomial(space, xi);
  Matrix t = Matrix::Zero(n, n);
  for (int q = 0; q < n; ++q) t((q + mono.shift) % n, q) = mono.phase(q);
  return OperatorMatrix::dense(std::move(t));
}

OperatorMatrix hermitian_f(const TorusSpace& space, PhaseVector xi) {
  const int n = space.dim();
  xi = xi.reduced(n);
  if (xi.q == 0) {
    // U^{xi_p}: diagonal in position
    Vector d(n);
    for (int q = 0; q < n; ++q) d(q) = space.tau_power(2 * xi.p * q).imag();
    return OperatorMatrix::diagonal(Basis::position, std::move(d));
  }
  if (xi.p == 0) {
    // V^{xi_q}: diagonal in momentum with eigenvalues exp(-2 pi i xi_q p / N)
    Vector d(n);
    for (int p = 0; p < n; ++p) d(p) = space.tau_power(-2 * xi.q * p).imag();
    return OperatorMatrix::diagonal(Basis::momentum, std::move(d));
  }
  const Matrix t = translation(space, xi).dense_entries();
  return OperatorMatrix::dense((t - t.adjoint()) / Complex(0.0, 2.0));
}

OperatorMatrix sine_position(const TorusSpace& space) { return hermitian_f(space, {0, 1}); }

OperatorMatrix sine_momentum(const TorusSpace& space) { return hermitian_f(space, {1, 0}); }

Complex ChordCoefficients::at(PhaseVector chi) const {
  chi = chi.reduced(dim_);
  return values_(chi.p, chi.q);
}

ChordCoefficients chord_transform(const TorusSpace& space, const Matrix& a) {
  const int n = space.dim();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("chord_transform: dimension mismatch");
  // Column c holds the wrapped diagonal a(q + c, q); its DFT over q gives
  // the chi_p dependence for chi_q = c.
  Matrix w(n, n);
  for (int c = 0; c < n; ++c)
    for (int q = 0; q < n; ++q) w(q, c) = a((q + c) % n, q);
  dft_plans(n).columns(w.data(), DftSign::forward);
  const auto tau = tau_table(n);
  const double scale = 1.0 / n;
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < n; ++p) w(p, c) *= std::conj(tau[(static_cast<std::int64_t>(c) * p) % (2 * n)]) * scale;
  return ChordCoefficients(n, std::move(w));
}

Matrix inverse_chord_transform(const TorusSpace& space, const ChordCoefficients& coeffs) {
  const int n = space.dim();
  if (coeffs.dim() != n) throw std::invalid_argument("inverse_chord_transform: dimension mismatch");
  Matrix w = coeffs.values();
  const auto tau = tau_table(n);
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < n; ++p) w(p, c) *= tau[(static_cast<std::int64_t>(c) * p) % (2 * n)];
  dft_plans(n).columns(w.data(), DftSign::backward);
  Matrix a(n, n);
  for (int c = 0; c < n; ++c)
    for (int q = 0; q < n; ++q) a((q + c) % n, q) = w(q, c);
  return a;
}

}  // namespace otoclab
