#pragma once

#include <cstdint>

#include "otoclab/types.hpp"

namespace otoclab {

// N-dimensional Hilbert space of a quantized 2-torus.
//
// Position states |q> and momentum states |p> (q, p = 0..N-1) are related by
// <q|p> = exp(+2 pi i q p / N) / sqrt(N). Every module inherits this choice.
class TorusSpace {
 public:
  explicit TorusSpace(int dim);

  int dim() const { return dim_; }
  // tau = exp(i pi / N)
  Complex tau() const;
  // tau^k with k reduced modulo 2N before the exponential
  Complex tau_power(std::int64_t k) const;
  // exp(2 pi i k / N) with k reduced modulo N
  Complex root_of_unity(std::int64_t k) const;
  // Effective Planck constant. Stored for reporting only.
  double h_eff() const;
  int wrap(std::int64_t k) const;

  bool operator==(const TorusSpace&) const = default;

 private:
  int dim_;
};

// Integer phase-space displacement xi = (xi_q, xi_p).
struct PhaseVector {
  std::int64_t q = 0;
  std::int64_t p = 0;

  PhaseVector reduced(int n) const;
  PhaseVector operator+(const PhaseVector& o) const { return {q + o.q, p + o.p}; }
  PhaseVector operator-() const { return {-q, -p}; }
  bool operator==(const PhaseVector&) const = default;
};

// <xi, chi> = xi_p chi_q - xi_q chi_p, not reduced.
std::int64_t symplectic_product(const PhaseVector& xi, const PhaseVector& chi);

enum class Basis { position, momentum };

// N x N operator on the torus. Either a dense matrix in the position basis,
// or a diagonal in the tagged basis. Diagonal storage keeps trace
// contractions against X (position) and P (momentum) at O(N^2).
class OperatorMatrix {
 public:
  static OperatorMatrix dense(Matrix entries);
  static OperatorMatrix diagonal(Basis basis, Vector entries);

  int dim() const;
  bool is_diagonal() const { return diagonal_; }
  Basis basis() const { return basis_; }
  const Vector& diagonal_entries() const;
  const Matrix& dense_entries() const;

  // Position-basis matrix, expanding tagged diagonals.
  Matrix to_dense() const;
  // Matrix in the momentum basis, F^dagger A F.
  Matrix to_momentum_dense() const;

  double hermiticity_residual() const;
  double unitarity_residual() const;
  Complex trace() const;

 private:
  OperatorMatrix() = default;
  bool diagonal_ = false;
  Basis basis_ = Basis::position;
  Matrix dense_;
  Vector diag_;
};

// Basis changes for dense position-basis matrices: F^dagger A F and F A F^dagger.
Matrix position_to_momentum(const Matrix& a);
Matrix momentum_to_position(const Matrix& a);

OperatorMatrix shift_v(const TorusSpace& space);
OperatorMatrix clock_u(const TorusSpace& space);
OperatorMatrix translation(const TorusSpace& space, PhaseVector xi);
OperatorMatrix sine_position(const TorusSpace& space);
OperatorMatrix sine_momentum(const TorusSpace& space);
OperatorMatrix hermitian_f(const TorusSpace& space, PhaseVector xi);

// A translation is monomial: T_xi |q> = phase(q) |q + xi_q>. Exposes the
// phases and the (reduced) column shift without building a dense matrix.
struct MonomialTranslation {
  int shift = 0;
  Vector phase;
};
MonomialTranslation translation_monomial(const TorusSpace& space, PhaseVector xi);

// Coefficients of A in the translation basis: A = sum_chi c(chi) T_chi,
// c(chi) = Tr(T_chi^dagger A) / N.
class ChordCoefficients {
 public:
  ChordCoefficients(int dim, Matrix values) : dim_(dim), values_(std::move(values)) {}

  int dim() const { return dim_; }
  Complex at(PhaseVector chi) const;
  // values()(chi_p, chi_q), both canonical in [0, N)
  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }

 private:
  int dim_;
  Matrix values_;
};

ChordCoefficients chord_transform(const TorusSpace& space, const Matrix& a);
Matrix inverse_chord_transform(const TorusSpace& space, const ChordCoefficients& coeffs);

}  // namespace otoclab
