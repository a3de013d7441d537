#include "otoclab/coarse_grain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "otoclab/dft.hpp"

namespace otoclab {
namespace {

RealMatrix c_tilde_table(int n, double epsilon) {
  RealVector s(n);
  for (int m = 0; m < n; ++m) {
    const double v = std::sin(kPi * m / n);
    s(m) = v * v;
  }
  RealMatrix c(n, n);
  const double a = epsilon * n / kPi / 2.0;
  for (int nu = 0; nu < n; ++nu)
    for (int mu = 0; mu < n; ++mu) c(mu, nu) = std::exp(-a * (s(mu) + s(nu)));
  return c;
}

}  // namespace

RealMatrix closed_form_diag_chord(const TorusSpace& space, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("coarse graining: epsilon must be >= 0");
  // c_tilde is symmetric in its two arguments
  return c_tilde_table(space.dim(), epsilon);
}

CoarseGrainKernel build_kernel(const TorusSpace& space, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("coarse graining: epsilon must be finite and >= 0");
  const int n = space.dim();
  const auto& plans = dft_plans(n);

  CoarseGrainKernel k;
  k.dim = n;
  k.epsilon = epsilon;
  k.c_tilde = c_tilde_table(n, epsilon);

  Matrix w = k.c_tilde.cast<Complex>();
  plans.columns(w.data(), DftSign::forward);
  plans.rows(w.data(), DftSign::forward);
  k.weights = w.real() / (static_cast<double>(n) * n);

  const double lowest = k.weights.minCoeff();
  if (lowest < 0.0) {
    k.clipped = -lowest;
    k.weights = k.weights.cwiseMax(0.0);
    std::ostringstream os;
    os.precision(3);
    os << "clipped negative weights, largest magnitude " << k.clipped;
    k.log.push_back(os.str());
  }
  k.weights /= k.weights.sum();

  // eigenvalue on T_chi: sum_xi c(xi) exp(2 pi i <chi, xi> / N)
  //   = sum_xi c(xi) exp(2 pi i (chi_p xi_q - chi_q xi_p) / N)
  Matrix d = k.weights.cast<Complex>();
  plans.columns(d.data(), DftSign::backward);  // xi_q -> chi_p
  plans.rows(d.data(), DftSign::forward);      // xi_p -> chi_q
  k.diag_chord = d.real();
  return k;
}

Matrix apply_dephasing_dense(const CoarseGrainKernel& kernel, const Matrix& a, bool force) {
  const int n = kernel.dim;
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("apply_dephasing_dense: dimension mismatch");
  if (n > 64 && !force) throw std::invalid_argument("apply_dephasing_dense: N > 64 requires force");
  const TorusSpace space(n);
  Matrix out = Matrix::Zero(n, n);
  for (int xp = 0; xp < n; ++xp) {
    for (int xq = 0; xq < n; ++xq) {
      const double c = kernel.weights(xq, xp);
      if (c == 0.0) continue;
      const auto t = translation_monomial(space, {xq, xp});
      // (T^dagger A T)(i, j) = conj(phi_i) A(i + s, j + s) phi_j
      for (int j = 0; j < n; ++j) {
        const int js = (j + t.shift) % n;
        for (int i = 0; i < n; ++i)
          out(i, j) += c * std::conj(t.phase(i)) * a((i + t.shift) % n, js) * t.phase(j);
      }
    }
  }
  return out;
}

Matrix apply_dephasing_chord(const CoarseGrainKernel& kernel, const Matrix& a) {
  const TorusSpace space(kernel.dim);
  auto coeffs = chord_transform(space, a);
  coeffs.values().array() *= kernel.diag_chord.array().cast<Complex>();
  return inverse_chord_transform(space, coeffs);
}

Channel::Channel(QuantumMap map, std::optional<CoarseGrainKernel> kernel)
    : map_(std::move(map)), kernel_(std::move(kernel)) {
  if (kernel_ && kernel_->dim != map_.dim()) throw std::invalid_argument("Channel: kernel dimension mismatch");
}

Matrix Channel::step(const Matrix& a) const {
  Matrix b = map_.conjugate(a);
  if (kernel_ && kernel_->epsilon > 0.0) b = apply_dephasing_chord(*kernel_, b);
  return b;
}

Matrix channel_step(const QuantumMap& map, const CoarseGrainKernel& kernel, const Matrix& a) {
  if (kernel.dim != map.dim()) throw std::invalid_argument("channel_step: dimension mismatch");
  Matrix b = map.conjugate(a);
  if (kernel.epsilon > 0.0) b = apply_dephasing_chord(kernel, b);
  return b;
}

}  // namespace otoclab
