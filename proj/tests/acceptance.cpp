#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "otoclab/classical.hpp"
#include "otoclab/coarse_grain.hpp"
#include "otoclab/otoc.hpp"
#include "otoclab/resonances.hpp"
#include "test_support.hpp"
#include "wavepacket.hpp"

using namespace otoclab;
using otoclab::testing::max_abs;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << (ok ? "" : "[fail] ") << what;
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

bool within(double value, double target, double rel) { return std::abs(value / target - 1.0) <= rel; }

const double kLambdaL = std::log((3.0 + std::sqrt(5.0)) / 2.0);

OtocSeries xp_series(const ClassicalMapSpec& spec, int n, double eps, int t_max,
                     KickMode mode = KickMode::correspondence) {
  const TorusSpace s(n);
  const Channel ch(quantize(spec, s, mode), eps > 0.0 ? std::optional(build_kernel(s, eps)) : std::nullopt);
  return otoc_series(ch, sine_position(s), sine_momentum(s), t_max, "XP");
}

// Tail window: from ceil(t_E) + 2 to the end of the series (t_max = 20, the
// runner default), cut at the last step before |O1| drops below 1e-12.
TailFit tail_after_ehrenfest(const OtocSeries& series, double lambda, int n) {
  const int start = static_cast<int>(std::ceil(ehrenfest_time(n, lambda))) + 2;
  int end = start;
  while (end + 1 < static_cast<int>(series.size()) && std::abs(series.o1[end + 1]) >= 1e-12) ++end;
  end = std::max(end, start + 3);
  return fit_tail_rate(series, start, std::min(end, static_cast<int>(series.size()) - 1));
}

std::string describe(const TailFit& f) {
  return "alpha=" + fmt(f.alpha) + " (t " + std::to_string(f.t_start) + ".." + std::to_string(f.t_end) +
         ", R2=" + fmt(f.r_squared, 3) + ")";
}

double map_lambda(const ClassicalMapSpec& spec) {
  if (spec.kind == MapKind::cat && spec.param1 == 0.0) return cat_lyapunov_exponent();
  return lyapunov(spec, 4000, 200, 1).lambda;
}

Outcome criterion_1() {
  Outcome o;
  for (int n : {256, 1024}) {
    const auto s = xp_series(ClassicalMapSpec::cat(0.0), n, 0.0, 12);
    double ec = 0, e1 = 0, e2 = 0;
    for (int t = 0; t <= 12; ++t) {
      const auto a = analytic_cat_otoc(t, n);
      ec = std::max(ec, std::abs(s.c[t] - a.c));
      e1 = std::max(e1, std::abs(s.o1[t] - Complex(a.o1, 0.0)));
      e2 = std::max(e2, std::abs(s.o2[t] - 0.25));
    }
    o.require(std::max({ec, e1, e2}) < 1e-8,
              "N=" + std::to_string(n) + " max err C " + fmt(ec, 2) + ", O1 " + fmt(e1, 2) + ", O2 " + fmt(e2, 2));
  }
  return o;
}

Outcome criterion_2() {
  Outcome o;
  for (double k : {0.0, 0.02}) {
    const auto s = xp_series(ClassicalMapSpec::cat(k), 1024, 0.0, 7);
    const auto fit = fit_lyapunov_from_otoc(s, 1, 6);
    const double tol = k == 0.0 ? 0.03 : 0.05;
    o.require(within(2 * fit.lambda, 2 * kLambdaL, tol),
              "k=" + fmt(k) + " rate " + fmt(2 * fit.lambda) + " vs " + fmt(2 * kLambdaL) + " (tol " + fmt(tol) + ")");
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const auto s = xp_series(ClassicalMapSpec::cat(0.02), 1024, 0.0, 22);
  double mean = 0.0;
  for (int t = 11; t <= 22; ++t) mean += s.c[t] / 12.0;
  o.require(within(mean, 0.5, 0.10), "mean C(11..22)=" + fmt(mean));
  return o;
}

Outcome criterion_4() {
  Outcome o;
  {
    const auto spec = ClassicalMapSpec::cat(0.02);
    const auto s = xp_series(spec, 1024, 0.01, 20);
    const auto f = tail_after_ehrenfest(s, map_lambda(spec), 1024);
    o.require(within(f.alpha, 0.526, 0.10), "k=0.02 eps=0.01 " + describe(f) + " vs 0.526");
  }
  const double ks[] = {0.25, 0.275, 0.325};
  const double targets[] = {0.698, 0.822, 0.864};
  for (int i = 0; i < 3; ++i) {
    const auto spec = ClassicalMapSpec::cat(ks[i]);
    const auto s = xp_series(spec, 1024, 0.0, 20);
    const auto f = tail_after_ehrenfest(s, map_lambda(spec), 1024);
    o.require(within(f.alpha, targets[i], 0.10), "k=" + fmt(ks[i]) + " eps=0 " + describe(f) + " vs " +
                                                     fmt(targets[i]) + ", |O1(2)|=" + fmt(std::abs(s.o1[2]), 2));
  }
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const int n = 1000;
  const double eps = 0.05;
  struct Case {
    ClassicalMapSpec spec;
    double target;
    const char* name;
  };
  for (const auto& c : {Case{ClassicalMapSpec::standard(19.74), 0.47, "standard K=19.74"},
                        Case{ClassicalMapSpec::harper(0.94), 0.38, "harper K=0.94"}}) {
    const double lambda = map_lambda(c.spec);
    const auto f = tail_after_ehrenfest(xp_series(c.spec, n, eps, 20), lambda, n);
    o.require(within(f.alpha, c.target, 0.10), std::string(c.name) + " N=1000 eps=0.05 " + describe(f) + " vs " +
                                                   fmt(c.target));
    const auto printed = xp_series(c.spec, n, eps, 20, KickMode::as_printed);
    o.detail << "; info: as_printed " << describe(tail_after_ehrenfest(printed, lambda, n));
  }
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const int n = 1000;
  const auto spec = ClassicalMapSpec::cat(0.02);
  const TorusSpace s(n);
  KrylovOptions opts;
  opts.depth = 50;
  const auto kr = krylov_leading(Channel(quantize(spec, s), build_kernel(s, 0.05)), sine_position(s).to_dense(), opts);
  const double reference = std::abs(kr.alphas[0]);
  o.require(kr.converged[0], "krylov eps=0.05 |alpha_1|=" + fmt(reference) + " residual " + fmt(kr.residuals[0], 2));
  const double lambda = map_lambda(spec);
  for (double eps : {0.01, 0.02, 0.05, 0.1}) {
    const auto f = tail_after_ehrenfest(xp_series(spec, n, eps, 20), lambda, n);
    o.require(within(f.alpha, reference, 0.10), "eps=" + fmt(eps) + " " + describe(f));
  }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  // dense vs chord dephasing
  double dc = 0.0;
  for (int n : {8, 16, 32}) {
    const auto k = build_kernel(TorusSpace(n), 0.2);
    const Matrix a = otoclab::testing::random_matrix(n, n);
    dc = std::max(dc, max_abs(apply_dephasing_dense(k, a) - apply_dephasing_chord(k, a)));
  }
  o.require(dc < 1e-10, "dephasing dense vs chord " + fmt(dc, 2));

  // krylov vs dense
  double kd = 0.0;
  for (int n : {12, 16, 20}) {
    const TorusSpace s(n);
    const Channel ch(quantize(ClassicalMapSpec::cat(0.02), s), build_kernel(s, 0.5));
    const auto dense = full_spectrum(dense_superoperator(ch), 0.5);
    KrylovOptions opts;
    opts.depth = 100;
    const auto kr = krylov_leading(ch, random_traceless_hermitian(n, 7), opts);
    const int lead = leading_nontrivial(dense);
    for (int i = 0; i < 3; ++i) kd = std::max(kd, std::abs(std::abs(kr.alphas[i]) - std::abs(dense.alphas[lead + i])));
  }
  o.require(kd < 1e-3, "krylov vs dense top-3 " + fmt(kd, 2));

  // translation algebra against V^q U^p tau^(qp)
  double ta = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const TorusSpace s(n);
    const Matrix v = shift_v(s).to_dense(), u = clock_u(s).to_dense();
    auto oracle = [&](PhaseVector z) {
      Matrix r = Matrix::Identity(n, n);
      for (std::int64_t i = 0; i < z.q; ++i) r = r * v;
      for (std::int64_t i = 0; i < z.p; ++i) r = r * u;
      return Matrix(r * std::polar(1.0, kPi * double(z.q * z.p) / n));
    };
    for (int i = 0; i < n * n; ++i)
      for (int j = 0; j < n * n; ++j) {
        const PhaseVector xi{i % n, i / n}, chi{j % n, j / n};
        const Matrix ti = translation(s, xi).to_dense(), tj = translation(s, chi).to_dense();
        const double w = static_cast<double>(symplectic_product(xi, chi));
        const Matrix sum = oracle(xi + chi);
        ta = std::max(ta, max_abs(ti * tj - std::polar(1.0, kPi * w / n) * sum));
        ta = std::max(ta, max_abs(ti * tj - tj * ti - Complex(0, 2) * std::sin(kPi * w / n) * sum));
      }
  }
  o.require(ta < 1e-12, "translation algebra N<=8 " + fmt(ta, 2));

  // commutator vs O1/O2 decomposition
  double cm = 0.0;
  {
    const int n = 64;
    const TorusSpace s(n);
    for (const auto& spec :
         {ClassicalMapSpec::cat(0.02), ClassicalMapSpec::standard(19.74), ClassicalMapSpec::harper(0.94)}) {
      const auto map = quantize(spec, s);
      const auto series = otoc_series(Channel(map), sine_position(s), sine_momentum(s), 8);
      Matrix a = sine_position(s).to_dense();
      const Matrix b = sine_momentum(s).to_dense();
      for (int t = 0; t <= 8; ++t) {
        cm = std::max(cm, std::abs(series.c[t] - otoc_commutator(a, b)));
        a = map.conjugate(a);
      }
    }
  }
  o.require(cm < 1e-10, "commutator vs decomposition N=64 " + fmt(cm, 2));

  // spectral O1 prediction with the leading coupled resonance only
  {
    const int n = 16;
    const double eps = 1.0;
    const TorusSpace s(n);
    const Channel ch(quantize(ClassicalMapSpec::cat(0.02), s), build_kernel(s, eps));
    const auto spec = full_spectrum(dense_superoperator(ch), eps);
    const Matrix x = sine_position(s).to_dense(), p = sine_momentum(s).to_dense();
    const Vector coeff = expansion_coefficients(spec, x);
    int terms = 0;
    for (int i = leading_nontrivial(spec); i < n * n; ++i) {
      ++terms;
      if (std::abs(coeff(i)) > 1e-8) break;
    }
    const auto series = otoc_series(ch, sine_position(s), sine_momentum(s), 12);
    double worst = 0.0;
    for (int t = 4; t <= 12; ++t)
      worst = std::max(worst, std::abs(spectral_o1_prediction(spec, x, p, t, terms) - series.o1[t]) /
                                  std::abs(series.o1[t]));
    o.require(worst < 0.10, "spectral O1 N=16 eps=1 t=4..12 rel err " + fmt(worst, 2) + " with " +
                                std::to_string(terms) + " terms");
  }
  return o;
}

Outcome criterion_8() {
  Outcome o;
  double unital = 0.0, radius = 0.0, growth = -1.0;
  int combos = 0;
  for (const auto& spec : {ClassicalMapSpec::cat(0.0), ClassicalMapSpec::cat(0.02), ClassicalMapSpec::standard(19.74),
                           ClassicalMapSpec::harper(0.94)})
    for (int n : {8, 16, 24})
      for (double eps : {0.0, 0.01, 0.1, 1.0}) {
        const TorusSpace s(n);
        const Channel ch(quantize(spec, s), build_kernel(s, eps));
        const Matrix id = Matrix::Identity(n, n);
        unital = std::max(unital, max_abs(ch.step(id) - id));
        for (unsigned seed = 0; seed < 3; ++seed) {
          const Matrix a = random_traceless_hermitian(n, seed);
          growth = std::max(growth, ch.step(a).norm() - a.norm());
        }
        const auto sp = full_spectrum(dense_superoperator(ch), eps);
        for (const auto& al : sp.alphas) radius = std::max(radius, std::abs(al));
        ++combos;
      }
  o.require(unital < 1e-12, "unitality " + fmt(unital, 2));
  o.require(radius <= 1.0 + 1e-9, "spectral radius " + fmt(radius, 15));
  o.require(growth <= 1e-12, "max norm growth on traceless " + fmt(growth, 2));
  o.detail << "; " << combos << " (map, N, eps) combinations";
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const auto e = lyapunov(ClassicalMapSpec::cat(0.0), 200, 50, 1);
  o.require(std::abs(e.lambda - 0.962424) < 1e-6, "lambda(cat, k=0)=" + fmt(e.lambda, 10));

  const int n = 2048;
  const auto rule = otoclab::testing::gauss_hermite(24);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : {ClassicalMapSpec::cat(0.02), ClassicalMapSpec::standard(19.74),
                           ClassicalMapSpec::harper(0.94)}) {
    const auto map = quantize(spec, TorusSpace(n));
    double worst = 0.0, worst_ensemble = 0.0;
    for (int i = 0; i < 20; ++i) {
      const PhasePoint c{u(rng), u(rng)};
      const auto sigma = otoclab::testing::least_biased_covariance(spec, n, c, rule);
      const auto r = otoclab::testing::correspondence(map, spec, c, sigma, rule);
      worst = std::max(worst, r.to_image);
      worst_ensemble = std::max(worst_ensemble, r.to_ensemble);
    }
    o.require(worst * n < 10.0, spec.label() + " worst deviation " + fmt(worst * n, 3) +
                                    "/N (info: vs classical ensemble " + fmt(worst_ensemble * n, 3) + "/N)");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion_1, criterion_2, criterion_3,
                                                          criterion_4, criterion_5, criterion_6,
                                                          criterion_7, criterion_8, criterion_9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s  [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
