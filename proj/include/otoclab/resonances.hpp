#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otoclab/coarse_grain.hpp"
#include "otoclab/otoc.hpp"

namespace otoclab {

enum class ResonanceMethod { dense, krylov, tail_fit };

std::string to_string(ResonanceMethod method);

struct ResonanceSpectrum {
  ResonanceMethod method = ResonanceMethod::dense;
  int dim = 0;
  double epsilon = 0.0;
  // Sorted by decreasing modulus.
  std::vector<Complex> alphas;
  std::vector<double> residuals;
  std::vector<bool> converged;
  // Dense only: columns are vec(R_i) and vec(L_i) (column-major), scaled so
  // that Tr(L_i^dagger R_j) = delta_ij.
  Matrix right;
  Matrix left;
  bool degenerate = false;
  // Indices within 1% in modulus of the leading nontrivial eigenvalue.
  std::vector<int> near_degenerate;
  std::vector<std::string> warnings;
};

// N^2 x N^2 matrix of the channel on vec(A), column-major. N <= 24.
Matrix dense_superoperator(const Channel& channel);

ResonanceSpectrum full_spectrum(const Matrix& superoperator, double epsilon = 0.0);

// Index of the first eigenvalue that is not the unit eigenvalue of the
// identity direction.
int leading_nontrivial(const ResonanceSpectrum& spectrum);

struct KrylovOptions {
  int depth = 40;
  int n_wanted = 6;
  double accept_residual = 1e-6;
  double fail_residual = 1e-4;
};

// Arnoldi in the Hilbert-Schmidt inner product, started from a traceless
// seed. The trace is projected out at every step so the invariant identity
// direction never enters the basis.
ResonanceSpectrum krylov_leading(const Channel& channel, const Matrix& seed, const KrylovOptions& options = {});

// Traceless Hermitian operator with Gaussian entries, reproducible from seed.
Matrix random_traceless_hermitian(int n, std::uint64_t seed);

struct TailFit {
  double alpha = 0.0;
  double r_squared = 0.0;
  int t_start = 0;
  int t_end = 0;
  int points = 0;
  bool hit_floor = false;
  std::vector<std::string> warnings;
};

// |alpha_1| = exp(slope / 2) from least squares on ln|O1(t)|. With envelope
// set, only local maxima of |O1| inside the window are fitted.
TailFit fit_tail_rate(const OtocSeries& series, int t_start, int t_end, bool envelope = false);

// O1(t) = Tr(A(t) B A(t) B) / N from A(t) = sum_i x_i alpha_i^t R_i with
// x_i = Tr(L_i^dagger A). n_terms < 0 keeps the full expansion; otherwise
// only the n_terms leading nontrivial eigenvalues (plus the identity term).
Complex spectral_o1_prediction(const ResonanceSpectrum& spectrum, const Matrix& a, const Matrix& b, int t,
                               int n_terms = -1);

// Expansion coefficients x_i = Tr(L_i^dagger A).
Vector expansion_coefficients(const ResonanceSpectrum& spectrum, const Matrix& a);

}  // namespace otoclab
