#pragma once

#include <string>

#include "otoclab/phase_space.hpp"

namespace otoclab {

enum class MapKind { cat, standard, harper };

// How nonlinear kick amplitudes are set when quantizing.
//  correspondence: chosen so that the quantum map reproduces classical_step
//                  in the semiclassical limit.
//  as_printed:     literal coefficients of the published quantum maps.
enum class KickMode { correspondence, as_printed };

// Classical torus maps on [0,1)^2:
//   cat(k):         p' = p + q - 2 pi k sin(2 pi q),  q' = q + p' + 2 pi k sin(2 pi p')
//   standard(K):    p' = p + K/(2 pi) sin(2 pi q),    q' = q + p'
//   harper(K1, K2): p' = p - K1 sin(2 pi q),          q' = q + K2 sin(2 pi p')
struct ClassicalMapSpec {
  MapKind kind = MapKind::cat;
  double param1 = 0.0;
  double param2 = 0.0;

  static ClassicalMapSpec cat(double k);
  static ClassicalMapSpec standard(double K);
  static ClassicalMapSpec harper(double K);
  static ClassicalMapSpec harper(double K1, double K2);

  std::string label() const;
};

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

// Rows (q', p'), columns (q, p).
using Jacobian2 = Eigen::Matrix2d;

PhasePoint classical_step(const ClassicalMapSpec& spec, PhasePoint point);
// Same map without the final reduction mod 1.
PhasePoint classical_step_lifted(const ClassicalMapSpec& spec, PhasePoint point);
Jacobian2 jacobian(const ClassicalMapSpec& spec, PhasePoint point);

// Amplitudes kappa of the cosine kicks, each entering the one-step
// propagator as exp(+-2 pi i kappa cos(2 pi j / N)).
struct KickPrefactors {
  double position = 0.0;
  double momentum = 0.0;
};
KickPrefactors kick_prefactor(const ClassicalMapSpec& spec, const TorusSpace& space,
                              KickMode mode = KickMode::correspondence);

enum class Direction { forward, adjoint };

// One-step propagator U = F K_p F^dagger K_q: a position kick, then a
// momentum kick applied through the DFT. Only the kick diagonals are stored.
class QuantumMap {
 public:
  QuantumMap(TorusSpace space, Vector momentum_phase, Vector position_phase);

  const TorusSpace& space() const { return space_; }
  int dim() const { return space_.dim(); }
  const Vector& momentum_phase() const { return momentum_phase_; }
  const Vector& position_phase() const { return position_phase_; }

  // U psi or U^dagger psi
  Vector apply(const Vector& psi, Direction direction = Direction::forward) const;
  // U A or U^dagger A
  Matrix apply(const Matrix& a, Direction direction = Direction::forward) const;
  // Heisenberg step U^dagger A U
  Matrix conjugate(const Matrix& a) const;
  Matrix materialize() const;

 private:
  TorusSpace space_;
  Vector momentum_phase_;
  Vector position_phase_;
};

QuantumMap quantize(const ClassicalMapSpec& spec, const TorusSpace& space,
                    KickMode mode = KickMode::correspondence);

}  // namespace otoclab
