#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otoclab/maps.hpp"

namespace otoclab {

// Translation dephasing D(A) = sum_xi c(xi) T_xi^dagger A T_xi.
//
// c_tilde(mu, nu) = exp(-(eps N / pi) (sin^2(pi mu / N) + sin^2(pi nu / N)) / 2)
// and the weights are its 2D DFT, scaled to unit sum. Translations are
// eigenoperators of D; diag_chord holds the eigenvalues indexed like
// ChordCoefficients::values(), i.e. (chi_p, chi_q).
struct CoarseGrainKernel {
  int dim = 0;
  double epsilon = 0.0;
  RealMatrix c_tilde;
  // weights(xi_q, xi_p)
  RealMatrix weights;
  RealMatrix diag_chord;
  // Largest negative weight removed before renormalization.
  double clipped = 0.0;
  std::vector<std::string> log;
};

CoarseGrainKernel build_kernel(const TorusSpace& space, double epsilon);

// diag_chord from the symmetry of c_tilde: the eigenvalue at chi equals
// c_tilde(chi_p, chi_q) before any clipping.
RealMatrix closed_form_diag_chord(const TorusSpace& space, double epsilon);

// Literal O(N^4) sum over all translations. Refuses N > 64 unless forced.
Matrix apply_dephasing_dense(const CoarseGrainKernel& kernel, const Matrix& a, bool force = false);

// Chord transform, scale by diag_chord, transform back. O(N^2 log N).
Matrix apply_dephasing_chord(const CoarseGrainKernel& kernel, const Matrix& a);

// A_{t+1} = D(U^dagger A_t U); without a kernel (or with eps = 0) a plain
// Heisenberg step.
class Channel {
 public:
  explicit Channel(QuantumMap map, std::optional<CoarseGrainKernel> kernel = std::nullopt);

  const QuantumMap& map() const { return map_; }
  const std::optional<CoarseGrainKernel>& kernel() const { return kernel_; }
  int dim() const { return map_.dim(); }
  double epsilon() const { return kernel_ ? kernel_->epsilon : 0.0; }

  Matrix step(const Matrix& a) const;

 private:
  QuantumMap map_;
  std::optional<CoarseGrainKernel> kernel_;
};

Matrix channel_step(const QuantumMap& map, const CoarseGrainKernel& kernel, const Matrix& a);

}  // namespace otoclab
