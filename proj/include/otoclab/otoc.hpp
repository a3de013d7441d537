#pragma once

#include <string>
#include <vector>

#include "otoclab/classical.hpp"
#include "otoclab/coarse_grain.hpp"

namespace otoclab {

struct OtocMetadata {
  std::string map;
  int dim = 0;
  double epsilon = 0.0;
  std::string operators;
};

// Per step t = 0..t_max, with normalized traces:
//   O1 = Tr(A(t) B A(t) B) / N,  O2 = Tr(A(t)^2 B^2) / N,  C = -2 Re(O1 - O2)
struct OtocSeries {
  std::vector<int> t;
  std::vector<double> c;
  std::vector<Complex> o1;
  std::vector<double> o2;
  OtocMetadata metadata;

  std::size_t size() const { return t.size(); }
};

// U^{dagger steps} A U^{steps}
OperatorMatrix heisenberg_evolve(const OperatorMatrix& a, const QuantumMap& map, int steps);

// A is evolved, B stays fixed. Contractions are O(N^2) per step when B is a
// tagged diagonal, O(N^3) otherwise.
OtocSeries otoc_series(const Channel& channel, const OperatorMatrix& a, const OperatorMatrix& b, int t_max,
                       const std::string& operator_label = "");

// Dense evaluation of <[A(t), B][A(t), B]^dagger> from the commutator.
double otoc_commutator(const Matrix& a_t, const Matrix& b);

// Closed form for the linear cat map with A = X, B = P.
struct AnalyticCatOtoc {
  int t = 0;
  std::int64_t a_t = 0;  // top-left entry of M^t reduced mod N
  double c = 0.0;
  double o1 = 0.0;
  double o2 = 0.0;
  // (pi / N)^2 exp(2 lambda t)
  double approximation = 0.0;
};
AnalyticCatOtoc analytic_cat_otoc(int t, int n);

// sin^2(pi <M^t xi, chi> / N): the OTOC of A = F_chi (evolved) and
// B = F_xi (fixed) under the linear cat map.
double otoc_family_linear(PhaseVector xi, PhaseVector chi, int t, int n,
                          const ClassicalMapSpec& spec = ClassicalMapSpec::cat(0.0));

struct LyapunovFit {
  double lambda = 0.0;
  double r_squared = 0.0;
  int t_start = 0;
  int t_end = 0;
  std::vector<std::string> warnings;
};

// Half the least-squares slope of ln C(t) over t in [t_start, t_end].
LyapunovFit fit_lyapunov_from_otoc(const OtocSeries& series, int t_start, int t_end);

}  // namespace otoclab
