#include <doctest.h>

#include <random>

#include "otoclab/otoc.hpp"
#include "test_support.hpp"

using namespace otoclab;
using otoclab::testing::max_abs;

namespace {

Channel unitary_channel(const ClassicalMapSpec& spec, int n) { return Channel(quantize(spec, TorusSpace(n))); }

Channel dephased_channel(const ClassicalMapSpec& spec, int n, double eps) {
  const TorusSpace s(n);
  return Channel(quantize(spec, s), build_kernel(s, eps));
}

}  // namespace

TEST_CASE("closed form for the linear cat map") {
  const auto a = analytic_cat_otoc(3, 1024);
  CHECK(a.a_t == 13);
  CHECK(a.c == doctest::Approx(std::pow(std::sin(13 * kPi / 1024), 2)).epsilon(1e-14));
  CHECK(a.c == doctest::Approx(1.589e-3).epsilon(1e-3));
  CHECK(a.o2 == 0.25);
  CHECK(a.c == doctest::Approx(-2 * (a.o1 - a.o2)).epsilon(1e-12));
  const double ratio = analytic_cat_otoc(4, 1024).c / a.c;
  CHECK(ratio == doctest::Approx(std::exp(2 * cat_lyapunov_exponent())).epsilon(0.02));
  CHECK(analytic_cat_otoc(0, 1024).c == doctest::Approx(std::pow(std::sin(kPi / 1024), 2)).epsilon(1e-14));
  CHECK(a.approximation == doctest::Approx(std::pow(kPi / 1024, 2) * std::exp(6 * cat_lyapunov_exponent())));
}

TEST_CASE("numerical series reproduces the closed form") {
  const int n = 1024;
  const TorusSpace s(n);
  const auto series =
      otoc_series(unitary_channel(ClassicalMapSpec::cat(0.0), n), sine_position(s), sine_momentum(s), 20, "XP");
  REQUIRE(series.size() == 21);
  double worst = 0.0, worst_o2 = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    worst = std::max(worst, std::abs(series.c[i] - analytic_cat_otoc(series.t[i], n).c));
    worst_o2 = std::max(worst_o2, std::abs(series.o2[i] - 0.25));
    CHECK(series.c[i] == doctest::Approx(-2 * (series.o1[i].real() - series.o2[i])).epsilon(1e-12));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_o2 < 1e-12);
  CHECK(series.metadata.dim == n);
  CHECK(series.metadata.operators == "XP");
}

TEST_CASE("family of F operators under the linear cat map") {
  CHECK(otoc_family_linear({1, 0}, {0, 1}, 0, 64) == doctest::Approx(std::pow(std::sin(kPi / 64), 2)));
  CHECK_THROWS_AS(otoc_family_linear({1, 0}, {0, 1}, 2, 64, ClassicalMapSpec::standard(1.0)), std::invalid_argument);

  const int n = 64;
  const TorusSpace s(n);
  const auto map = quantize(ClassicalMapSpec::cat(0.0), s);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, n - 1);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const PhaseVector xi{d(rng), d(rng)}, chi{d(rng), d(rng)};
    if (xi == PhaseVector{0, 0} || chi == PhaseVector{0, 0}) continue;
    const Matrix b = hermitian_f(s, xi).to_dense();
    Matrix a = hermitian_f(s, chi).to_dense();
    for (int t = 0; t <= 5; ++t) {
      worst = std::max(worst, std::abs(otoc_commutator(a, b) - otoc_family_linear(xi, chi, t, n)));
      a = map.conjugate(a);
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("trace contractions match the commutator") {
  const int n = 64;
  const TorusSpace s(n);
  const ClassicalMapSpec maps[] = {ClassicalMapSpec::cat(0.02), ClassicalMapSpec::standard(19.74),
                                   ClassicalMapSpec::harper(0.94)};
  const auto dense_b = OperatorMatrix::dense(otoclab::testing::random_hermitian(n, 8));
  for (const auto& spec : maps)
    for (const auto& b : {sine_momentum(s), sine_position(s), dense_b}) {
      const auto map = quantize(spec, s);
      const auto series = otoc_series(Channel(map), sine_position(s), b, 6);
      Matrix a = sine_position(s).to_dense();
      double worst = 0.0;
      for (int t = 0; t <= 6; ++t) {
        worst = std::max(worst, std::abs(series.c[t] - otoc_commutator(a, b.to_dense())));
        CHECK(series.c[t] >= -1e-10);
        a = map.conjugate(a);
      }
      CHECK(worst < 1e-10);
    }
}

TEST_CASE("heisenberg evolution") {
  const TorusSpace s(32);
  const auto map = quantize(ClassicalMapSpec::harper(0.94), s);
  const auto x = sine_position(s);
  const Matrix expect = map.conjugate(map.conjugate(x.to_dense()));
  CHECK(max_abs(heisenberg_evolve(x, map, 2).to_dense() - expect) < 1e-12);
  CHECK(max_abs(heisenberg_evolve(x, map, 0).to_dense() - x.to_dense()) < 1e-15);
}

TEST_CASE("inputs are validated") {
  const TorusSpace s(16);
  const auto ch = unitary_channel(ClassicalMapSpec::cat(0.0), 16);
  const auto bad = OperatorMatrix::dense(otoclab::testing::random_matrix(16, 1));
  CHECK_THROWS_AS(otoc_series(ch, bad, sine_momentum(s), 3), std::invalid_argument);
  CHECK_THROWS_AS(otoc_series(ch, sine_position(s), bad, 3), std::invalid_argument);
  CHECK_THROWS_AS(otoc_series(ch, sine_position(TorusSpace(8)), sine_momentum(s), 3), std::invalid_argument);
  CHECK_THROWS_AS(otoc_series(ch, sine_position(s), sine_momentum(s), -1), std::invalid_argument);
}

TEST_CASE("coarse-grained series decays") {
  const int n = 1024;
  const TorusSpace s(n);
  const auto series = otoc_series(dephased_channel(ClassicalMapSpec::cat(0.02), n, 0.01), sine_position(s),
                                  sine_momentum(s), 14);
  CHECK(std::abs(series.o1[14]) < 1e-2 * std::abs(series.o1[0]));
  CHECK(series.o2[14] < 0.5 * series.o2[0]);
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(series.c[i] >= -1e-10);
    CHECK(series.c[i] == doctest::Approx(-2 * (series.o1[i].real() - series.o2[i])).epsilon(1e-12));
  }
}

TEST_CASE("lyapunov fit from an OTOC series") {
  OtocSeries synthetic;
  for (int t = 0; t <= 10; ++t) {
    synthetic.t.push_back(t);
    synthetic.c.push_back(1e-6 * std::exp(2 * 0.5 * t));
    synthetic.o1.push_back(0.0);
    synthetic.o2.push_back(0.0);
  }
  const auto fit = fit_lyapunov_from_otoc(synthetic, 1, 8);
  CHECK(fit.lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.warnings.empty());
  synthetic.c[4] = 0.0;
  CHECK_THROWS(fit_lyapunov_from_otoc(synthetic, 1, 8));

  const int n = 1024;
  const TorusSpace s(n);
  const auto series =
      otoc_series(unitary_channel(ClassicalMapSpec::cat(0.0), n), sine_position(s), sine_momentum(s), 7);
  const auto real = fit_lyapunov_from_otoc(series, 1, 6);
  CHECK(real.lambda == doctest::Approx(cat_lyapunov_exponent()).epsilon(0.05));
}
