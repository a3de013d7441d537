#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "otoclab/maps.hpp"

namespace otoclab {

using BigInt = boost::multiprecision::cpp_int;

// Exact integer power M^t of the cat monodromy M = (2 1; 1 1).
struct MonodromyPower {
  int t = 0;
  BigInt a = 1, b = 0, c = 0, d = 1;

  // Entries reduced to [0, n).
  std::int64_t a_mod(std::int64_t n) const;
  std::int64_t b_mod(std::int64_t n) const;
  std::int64_t c_mod(std::int64_t n) const;
  std::int64_t d_mod(std::int64_t n) const;
  BigInt determinant() const { return a * d - b * c; }
  // M^t applied to an integer vector (xi_q, xi_p), reduced mod n.
  PhaseVector apply_mod(PhaseVector xi, std::int64_t n) const;
};

MonodromyPower cat_matrix_power(int t);

// ln((3 + sqrt 5) / 2)
double cat_lyapunov_exponent();

struct LyapunovEstimate {
  double lambda = 0.0;
  double lambda_generalized = 0.0;
  int n_trajectories = 0;
  int t_horizon = 0;
  int warmup = 0;
  std::uint64_t seed = 0;
  double standard_error = 0.0;
  int n_resampled = 0;
  std::vector<std::string> warnings;
};

struct LyapunovOptions {
  // Steps spent aligning the tangent vector before accumulation starts.
  int warmup = 50;
};

// Per-step exponents from tangent vectors renormalized every step, averaged
// over uniformly sampled initial points. lambda averages the logarithms;
// lambda_generalized averages the growth factors first. Each trajectory is
// seeded from (seed, index), so the result does not depend on scheduling.
LyapunovEstimate lyapunov(const ClassicalMapSpec& spec, int n_traj, int t_horizon, std::uint64_t seed,
                          const LyapunovOptions& options = {});

double ehrenfest_time(double n, double lambda);

}  // namespace otoclab
