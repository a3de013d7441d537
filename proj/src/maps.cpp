#include "otoclab/maps.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "otoclab/dft.hpp"

namespace otoclab {
namespace {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

// exp(i * sign * 2 pi kappa cos(2 pi j / N))
Complex cos_kick(const TorusSpace& space, int j, double kappa, double sign) {
  return std::polar(1.0, sign * kTwoPi * kappa * std::cos(kTwoPi * j / space.dim()));
}

}  // namespace

ClassicalMapSpec ClassicalMapSpec::cat(double k) {
  require_finite(k, "cat map parameter");
  return {MapKind::cat, k, 0.0};
}

ClassicalMapSpec ClassicalMapSpec::standard(double K) {
  require_finite(K, "standard map parameter");
  return {MapKind::standard, K, 0.0};
}

ClassicalMapSpec ClassicalMapSpec::harper(double K) { return harper(K, K); }

ClassicalMapSpec ClassicalMapSpec::harper(double K1, double K2) {
  require_finite(K1, "Harper map parameter");
  require_finite(K2, "Harper map parameter");
  return {MapKind::harper, K1, K2};
}

std::string ClassicalMapSpec::label() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case MapKind::cat: os << "cat(k=" << param1 << ")"; break;
    case MapKind::standard: os << "standard(K=" << param1 << ")"; break;
    case MapKind::harper: os << "harper(K1=" << param1 << ",K2=" << param2 << ")"; break;
  }
  return os.str();
}

PhasePoint classical_step_lifted(const ClassicalMapSpec& spec, PhasePoint x) {
  switch (spec.kind) {
    case MapKind::cat: {
      const double k = spec.param1;
      const double p = x.p + x.q - kTwoPi * k * std::sin(kTwoPi * x.q);
      const double q = x.q + p + kTwoPi * k * std::sin(kTwoPi * p);
      return {q, p};
    }
    case MapKind::standard: {
      const double p = x.p + spec.param1 / kTwoPi * std::sin(kTwoPi * x.q);
      return {x.q + p, p};
    }
    case MapKind::harper: {
      const double p = x.p - spec.param1 * std::sin(kTwoPi * x.q);
      return {x.q + spec.param2 * std::sin(kTwoPi * p), p};
    }
  }
  throw std::logic_error("unknown map kind");
}

PhasePoint classical_step(const ClassicalMapSpec& spec, PhasePoint x) {
  const auto y = classical_step_lifted(spec, x);
  return {wrap_unit(y.q), wrap_unit(y.p)};
}

Jacobian2 jacobian(const ClassicalMapSpec& spec, PhasePoint x) {
  double dp_dq = 0.0;
  double dq_dpnew = 1.0;
  switch (spec.kind) {
    case MapKind::cat: {
      const double k = spec.param1;
      dp_dq = 1.0 - 4.0 * kPi * kPi * k * std::cos(kTwoPi * x.q);
      const double p = x.p + x.q - kTwoPi * k * std::sin(kTwoPi * x.q);
      dq_dpnew = 1.0 + 4.0 * kPi * kPi * k * std::cos(kTwoPi * p);
      break;
    }
    case MapKind::standard:
      dp_dq = spec.param1 * std::cos(kTwoPi * x.q);
      break;
    case MapKind::harper: {
      dp_dq = -kTwoPi * spec.param1 * std::cos(kTwoPi * x.q);
      const double p = x.p - spec.param1 * std::sin(kTwoPi * x.q);
      dq_dpnew = kTwoPi * spec.param2 * std::cos(kTwoPi * p);
      break;
    }
  }
  // p' = p + f(q); q' = q + g(p') with dq'/dp' = dq_dpnew
  Jacobian2 j;
  j << 1.0 + dq_dpnew * dp_dq, dq_dpnew,
       dp_dq, 1.0;
  return j;
}

KickPrefactors kick_prefactor(const ClassicalMapSpec& spec, const TorusSpace& space, KickMode mode) {
  const double n = space.dim();
  switch (spec.kind) {
    case MapKind::cat:
      return {spec.param1 * n, spec.param1 * n};
    case MapKind::standard:
      if (mode == KickMode::as_printed) return {n * spec.param1, 0.0};
      return {n * spec.param1 / (4.0 * kPi * kPi), 0.0};
    case MapKind::harper:
      if (mode == KickMode::as_printed) return {n * spec.param1, n * spec.param2};
      return {n * spec.param1 / kTwoPi, n * spec.param2 / kTwoPi};
  }
  throw std::logic_error("unknown map kind");
}

QuantumMap::QuantumMap(TorusSpace space, Vector momentum_phase, Vector position_phase)
    : space_(space), momentum_phase_(std::move(momentum_phase)), position_phase_(std::move(position_phase)) {
  if (momentum_phase_.size() != space_.dim() || position_phase_.size() != space_.dim())
    throw std::invalid_argument("QuantumMap: kick phase length must equal the dimension");
  const double dev = std::max((momentum_phase_.cwiseAbs().array() - 1.0).abs().maxCoeff(),
                              (position_phase_.cwiseAbs().array() - 1.0).abs().maxCoeff());
  if (dev > 1e-12) throw std::invalid_argument("QuantumMap: kick phases must have unit modulus");
}

Vector QuantumMap::apply(const Vector& psi, Direction direction) const {
  const int n = dim();
  if (psi.size() != n) throw std::invalid_argument("apply_map: dimension mismatch");
  const auto& plans = dft_plans(n);
  Vector x = psi;
  if (direction == Direction::forward) {
    x.array() *= position_phase_.array();
    plans.vector(x.data(), DftSign::forward);
    x.array() *= momentum_phase_.array();
    plans.vector(x.data(), DftSign::backward);
    x /= static_cast<double>(n);
  } else {
    plans.vector(x.data(), DftSign::forward);
    x.array() *= momentum_phase_.array().conjugate();
    plans.vector(x.data(), DftSign::backward);
    x /= static_cast<double>(n);
    x.array() *= position_phase_.array().conjugate();
  }
  return x;
}

Matrix QuantumMap::apply(const Matrix& a, Direction direction) const {
  const int n = dim();
  if (a.rows() != n) throw std::invalid_argument("apply_map: dimension mismatch");
  if (a.cols() != n) {
    Matrix out(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.col(j) = apply(Vector(a.col(j)), direction);
    return out;
  }
  const auto& plans = dft_plans(n);
  Matrix x = a;
  if (direction == Direction::forward) {
    x.array().colwise() *= position_phase_.array();
    plans.columns(x.data(), DftSign::forward);
    x.array().colwise() *= momentum_phase_.array();
    plans.columns(x.data(), DftSign::backward);
    x /= static_cast<double>(n);
  } else {
    plans.columns(x.data(), DftSign::forward);
    x.array().colwise() *= momentum_phase_.array().conjugate();
    plans.columns(x.data(), DftSign::backward);
    x /= static_cast<double>(n);
    x.array().colwise() *= position_phase_.array().conjugate();
  }
  return x;
}

Matrix QuantumMap::conjugate(const Matrix& a) const {
  const int n = dim();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("heisenberg step: dimension mismatch");
  const auto& plans = dft_plans(n);
  // F^dagger A F, then the momentum kick on both sides
  Matrix x = a;
  plans.columns(x.data(), DftSign::forward);
  plans.rows(x.data(), DftSign::backward);
  x.array().colwise() *= momentum_phase_.array().conjugate();
  x.array().rowwise() *= momentum_phase_.array().transpose();
  // back to position, then the position kick on both sides
  plans.columns(x.data(), DftSign::backward);
  plans.rows(x.data(), DftSign::forward);
  x /= static_cast<double>(n) * n;
  x.array().colwise() *= position_phase_.array().conjugate();
  x.array().rowwise() *= position_phase_.array().transpose();
  return x;
}

Matrix QuantumMap::materialize() const { return apply(Matrix(Matrix::Identity(dim(), dim()))); }

QuantumMap quantize(const ClassicalMapSpec& spec, const TorusSpace& space, KickMode mode) {
  const int n = space.dim();
  const auto kappa = kick_prefactor(spec, space, mode);
  Vector kp(n), kq(n);
  for (int j = 0; j < n; ++j) {
    // exp(-i pi j^2 / N) with j^2 reduced mod 2N
    const Complex free = space.tau_power(-static_cast<std::int64_t>(j) * j);
    switch (spec.kind) {
      case MapKind::cat: {
        kp(j) = free * cos_kick(space, j, kappa.momentum, +1.0);
        // The position factor carries +i; with -i the linear part of the
        // quantized map has trace 1 and is not hyperbolic.
        const double sign = mode == KickMode::correspondence ? +1.0 : -1.0;
        kq(j) = (sign > 0 ? std::conj(free) : free) * cos_kick(space, j, kappa.position, sign);
        break;
      }
      case MapKind::standard:
        kp(j) = free;
        kq(j) = cos_kick(space, j, kappa.position, -1.0);
        break;
      case MapKind::harper:
        kp(j) = cos_kick(space, j, kappa.momentum, +1.0);
        kq(j) = cos_kick(space, j, kappa.position, +1.0);
        break;
    }
  }
  return QuantumMap(space, std::move(kp), std::move(kq));
}

}  // namespace otoclab
