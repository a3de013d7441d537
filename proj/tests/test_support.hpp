#pragma once

#include <random>

#include "otoclab/types.hpp"

namespace otoclab::testing {

inline Matrix random_matrix(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline Matrix random_hermitian(int n, unsigned seed) {
  const Matrix a = random_matrix(n, seed);
  return (a + a.adjoint()) / 2.0;
}

inline Vector random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

// exp(2 pi i q p / N) / sqrt(N)
inline Matrix dft_matrix(int n) {
  Matrix f(n, n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) f(q, p) = std::polar(1.0 / std::sqrt(double(n)), 2.0 * kPi * q * p / n);
  return f;
}

}  // namespace otoclab::testing
