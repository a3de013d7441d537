#include "otoclab/classical.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace otoclab {
namespace {

std::int64_t reduce(const BigInt& v, std::int64_t n) {
  BigInt r = v % n;
  if (r < 0) r += n;
  return r.convert_to<std::int64_t>();
}

double torus_distance(PhasePoint a, PhasePoint b) {
  auto d = [](double x, double y) {
    double r = std::fabs(x - y);
    return std::min(r, 1.0 - r);
  };
  return std::hypot(d(a.q, b.q), d(a.p, b.p));
}

}  // namespace

std::int64_t MonodromyPower::a_mod(std::int64_t n) const { return reduce(a, n); }
std::int64_t MonodromyPower::b_mod(std::int64_t n) const { return reduce(b, n); }
std::int64_t MonodromyPower::c_mod(std::int64_t n) const { return reduce(c, n); }
std::int64_t MonodromyPower::d_mod(std::int64_t n) const { return reduce(d, n); }

PhaseVector MonodromyPower::apply_mod(PhaseVector xi, std::int64_t n) const {
  const BigInt q = a * xi.q + b * xi.p;
  const BigInt p = c * xi.q + d * xi.p;
  return {reduce(q, n), reduce(p, n)};
}

MonodromyPower cat_matrix_power(int t) {
  if (t < 0) throw std::invalid_argument("cat_matrix_power: t must be >= 0");
  MonodromyPower m;
  for (int s = 0; s < t; ++s) {
    // (2 1; 1 1) * (a b; c d)
    BigInt a = 2 * m.a + m.c, b = 2 * m.b + m.d;
    BigInt c = m.a + m.c, d = m.b + m.d;
    m.a = std::move(a);
    m.b = std::move(b);
    m.c = std::move(c);
    m.d = std::move(d);
  }
  m.t = t;
  return m;
}

double cat_lyapunov_exponent() { return std::log((3.0 + std::sqrt(5.0)) / 2.0); }

LyapunovEstimate lyapunov(const ClassicalMapSpec& spec, int n_traj, int t_horizon, std::uint64_t seed,
                          const LyapunovOptions& options) {
  if (t_horizon < 10) throw std::invalid_argument("lyapunov: t_horizon must be >= 10");
  if (n_traj < 1) throw std::invalid_argument("lyapunov: n_traj must be >= 1");
  if (options.warmup < 0) throw std::invalid_argument("lyapunov: warmup must be >= 0");

  LyapunovEstimate est;
  est.n_trajectories = n_traj;
  est.t_horizon = t_horizon;
  est.warmup = options.warmup;
  est.seed = seed;

  std::vector<double> rates(n_traj);
  for (int i = 0; i < n_traj; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PhasePoint x{unit(rng), unit(rng)};
    // Points sitting on a fixed point never leave it; draw again.
    while (torus_distance(classical_step(spec, x), x) < 1e-12) {
      ++est.n_resampled;
      x = {unit(rng), unit(rng)};
    }
    Eigen::Vector2d v(unit(rng) - 0.5, unit(rng) - 0.5);
    v.normalize();

    double log_growth = 0.0;
    for (int s = 0; s < options.warmup + t_horizon; ++s) {
      v = jacobian(spec, x) * v;
      const double norm = v.norm();
      v /= norm;
      if (s >= options.warmup) log_growth += std::log(norm);
      x = classical_step(spec, x);
    }
    rates[i] = log_growth / t_horizon;
  }

  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= n_traj;
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  var = n_traj > 1 ? var / (n_traj - 1) : 0.0;

  // ln < exp(t * rate) > / t, evaluated with the maximum factored out
  const double top = *std::max_element(rates.begin(), rates.end());
  double acc = 0.0;
  for (double r : rates) acc += std::exp(t_horizon * (r - top));
  est.lambda = mean;
  est.lambda_generalized = top + std::log(acc / n_traj) / t_horizon;
  est.standard_error = std::sqrt(var / n_traj);
  if (est.lambda != 0.0 && est.standard_error > 0.05 * std::fabs(est.lambda))
    est.warnings.push_back("standard error exceeds 5% of lambda");
  return est;
}

double ehrenfest_time(double n, double lambda) {
  if (n < 2) throw std::invalid_argument("ehrenfest_time: N must be >= 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("ehrenfest_time: lambda must be > 0");
  return std::log(n) / lambda;
}

}  // namespace otoclab
