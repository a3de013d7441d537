#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "otoclab/classical.hpp"
#include "otoclab/coarse_grain.hpp"
#include "otoclab/otoc.hpp"
#include "otoclab/resonances.hpp"
#include "otoclab/runner.hpp"

namespace py = pybind11;
using namespace otoclab;

namespace {

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

PhaseVector vec(std::pair<std::int64_t, std::int64_t> v) { return {v.first, v.second}; }

KickMode parse_mode(const std::string& mode) {
  if (mode == "correspondence") return KickMode::correspondence;
  if (mode == "as_printed") return KickMode::as_printed;
  throw py::value_error("kick mode must be 'correspondence' or 'as_printed'");
}

runner::RunConfig make_config(const py::dict& settings) {
  runner::RunConfig c;
  for (const auto& [k, v] : settings) {
    std::string value;
    if (py::isinstance<py::str>(v)) value = v.cast<std::string>();
    else if (py::isinstance<py::bool_>(v)) value = v.cast<bool>() ? "true" : "false";
    else if (py::isinstance<py::int_>(v)) value = std::to_string(v.cast<long long>());
    else if (py::isinstance<py::float_>(v)) value = runner::format_number(v.cast<double>());
    else if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (const auto& item : v) {
        if (!value.empty()) value += ",";
        value += py::isinstance<py::str>(item) ? item.cast<std::string>()
                                               : runner::format_number(item.cast<double>());
      }
    } else {
      value = py::str(v).cast<std::string>();
    }
    runner::apply_setting(c, k.cast<std::string>(), value);
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Out-of-time-order correlators and resonances of quantized torus maps";
  m.attr("__version__") = OTOCLAB_VERSION;

  py::register_exception<runner::RunError>(m, "RunError", PyExc_RuntimeError);

  py::class_<ClassicalMapSpec>(m, "MapSpec")
      .def_static("cat", &ClassicalMapSpec::cat, py::arg("k"))
      .def_static("standard", &ClassicalMapSpec::standard, py::arg("K"))
      .def_static("harper", py::overload_cast<double>(&ClassicalMapSpec::harper), py::arg("K"))
      .def_static("harper2", py::overload_cast<double, double>(&ClassicalMapSpec::harper), py::arg("K1"),
                  py::arg("K2"))
      .def_property_readonly("label", &ClassicalMapSpec::label)
      .def("__repr__", [](const ClassicalMapSpec& s) { return "MapSpec(" + s.label() + ")"; });

  m.def(
      "classical_step",
      [](const ClassicalMapSpec& s, double q, double p) {
        const auto r = classical_step(s, {q, p});
        return std::make_pair(r.q, r.p);
      },
      py::arg("spec"), py::arg("q"), py::arg("p"));
  m.def(
      "jacobian", [](const ClassicalMapSpec& s, double q, double p) { return Eigen::Matrix2d(jacobian(s, {q, p})); },
      py::arg("spec"), py::arg("q"), py::arg("p"));

  py::class_<OperatorMatrix>(m, "Operator")
      .def_static(
          "from_matrix", [](const Matrix& a) { return OperatorMatrix::dense(a); }, py::arg("matrix"))
      .def_property_readonly("dim", &OperatorMatrix::dim)
      .def_property_readonly("is_diagonal", &OperatorMatrix::is_diagonal)
      .def("to_dense", &OperatorMatrix::to_dense);
  m.def(
      "sine_position", [](int n) { return sine_position(TorusSpace(n)); }, py::arg("n"));
  m.def(
      "sine_momentum", [](int n) { return sine_momentum(TorusSpace(n)); }, py::arg("n"));
  m.def(
      "translation",
      [](int n, std::pair<std::int64_t, std::int64_t> xi) { return translation(TorusSpace(n), vec(xi)); },
      py::arg("n"), py::arg("xi"));
  m.def(
      "hermitian_f",
      [](int n, std::pair<std::int64_t, std::int64_t> xi) { return hermitian_f(TorusSpace(n), vec(xi)); },
      py::arg("n"), py::arg("xi"));

  py::class_<QuantumMap>(m, "QuantumMap")
      .def_property_readonly("dim", &QuantumMap::dim)
      .def("materialize", &QuantumMap::materialize)
      .def("conjugate", &QuantumMap::conjugate, py::arg("a"))
      .def(
          "apply", [](const QuantumMap& q, const Vector& psi) { return q.apply(psi); }, py::arg("psi"));
  m.def(
      "quantize",
      [](const ClassicalMapSpec& s, int n, const std::string& mode) {
        return quantize(s, TorusSpace(n), parse_mode(mode));
      },
      py::arg("spec"), py::arg("n"), py::arg("kick_mode") = "correspondence");

  py::class_<CoarseGrainKernel>(m, "Kernel")
      .def_readonly("dim", &CoarseGrainKernel::dim)
      .def_readonly("epsilon", &CoarseGrainKernel::epsilon)
      .def_readonly("c_tilde", &CoarseGrainKernel::c_tilde)
      .def_readonly("weights", &CoarseGrainKernel::weights)
      .def_readonly("diag_chord", &CoarseGrainKernel::diag_chord)
      .def_readonly("clipped", &CoarseGrainKernel::clipped);
  m.def(
      "build_kernel", [](int n, double eps) { return build_kernel(TorusSpace(n), eps); }, py::arg("n"),
      py::arg("epsilon"));
  m.def("apply_dephasing", &apply_dephasing_chord, py::arg("kernel"), py::arg("a"));

  py::class_<Channel>(m, "Channel")
      .def(py::init([](const QuantumMap& map, double eps) {
             return eps > 0.0 ? Channel(map, build_kernel(map.space(), eps)) : Channel(map);
           }),
           py::arg("map"), py::arg("epsilon") = 0.0)
      .def_property_readonly("dim", &Channel::dim)
      .def_property_readonly("epsilon", &Channel::epsilon)
      .def("step", &Channel::step, py::arg("a"));

  py::class_<OtocSeries>(m, "OtocSeries")
      .def_readonly("t", &OtocSeries::t)
      .def_readonly("c", &OtocSeries::c)
      .def_readonly("o1", &OtocSeries::o1)
      .def_readonly("o2", &OtocSeries::o2)
      .def("__len__", &OtocSeries::size);
  m.def("otoc_series", &otoc_series, py::arg("channel"), py::arg("a"), py::arg("b"), py::arg("t_max"),
        py::arg("label") = "");
  m.def("otoc_commutator", &otoc_commutator, py::arg("a_t"), py::arg("b"));
  m.def(
      "analytic_cat_otoc",
      [](int t, int n) {
        const auto a = analytic_cat_otoc(t, n);
        py::dict d;
        d["t"] = a.t;
        d["a_t"] = a.a_t;
        d["c"] = a.c;
        d["o1"] = a.o1;
        d["o2"] = a.o2;
        d["approximation"] = a.approximation;
        return d;
      },
      py::arg("t"), py::arg("n"));
  m.def(
      "otoc_family_linear",
      [](std::pair<std::int64_t, std::int64_t> xi, std::pair<std::int64_t, std::int64_t> chi, int t, int n) {
        return otoc_family_linear(vec(xi), vec(chi), t, n);
      },
      py::arg("xi"), py::arg("chi"), py::arg("t"), py::arg("n"));

  py::class_<LyapunovFit>(m, "LyapunovFit")
      .def_readonly("lam", &LyapunovFit::lambda)
      .def_readonly("r_squared", &LyapunovFit::r_squared)
      .def_readonly("t_start", &LyapunovFit::t_start)
      .def_readonly("t_end", &LyapunovFit::t_end)
      .def_readonly("warnings", &LyapunovFit::warnings);
  m.def("fit_lyapunov_from_otoc", &fit_lyapunov_from_otoc, py::arg("series"), py::arg("t_start"), py::arg("t_end"));

  py::class_<TailFit>(m, "TailFit")
      .def_readonly("alpha", &TailFit::alpha)
      .def_readonly("r_squared", &TailFit::r_squared)
      .def_readonly("t_start", &TailFit::t_start)
      .def_readonly("t_end", &TailFit::t_end)
      .def_readonly("hit_floor", &TailFit::hit_floor)
      .def_readonly("warnings", &TailFit::warnings);
  m.def("fit_tail_rate", &fit_tail_rate, py::arg("series"), py::arg("t_start"), py::arg("t_end"),
        py::arg("envelope") = false);

  py::class_<LyapunovEstimate>(m, "LyapunovEstimate")
      .def_readonly("lam", &LyapunovEstimate::lambda)
      .def_readonly("lam_generalized", &LyapunovEstimate::lambda_generalized)
      .def_readonly("standard_error", &LyapunovEstimate::standard_error)
      .def_readonly("n_trajectories", &LyapunovEstimate::n_trajectories)
      .def_readonly("warnings", &LyapunovEstimate::warnings);
  m.def(
      "lyapunov",
      [](const ClassicalMapSpec& s, int n_traj, int t_horizon, std::uint64_t seed) {
        py::gil_scoped_release release;
        return lyapunov(s, n_traj, t_horizon, seed);
      },
      py::arg("spec"), py::arg("n_traj") = 2000, py::arg("t_horizon") = 50, py::arg("seed") = 1);
  m.def("cat_lyapunov_exponent", &cat_lyapunov_exponent);
  m.def("ehrenfest_time", &ehrenfest_time, py::arg("n"), py::arg("lam"));
  m.def(
      "cat_matrix_power",
      [](int t) {
        const auto p = cat_matrix_power(t);
        return py::make_tuple(to_py(p.a), to_py(p.b), to_py(p.c), to_py(p.d));
      },
      py::arg("t"));

  py::class_<ResonanceSpectrum>(m, "ResonanceSpectrum")
      .def_property_readonly("method", [](const ResonanceSpectrum& s) { return to_string(s.method); })
      .def_readonly("dim", &ResonanceSpectrum::dim)
      .def_readonly("epsilon", &ResonanceSpectrum::epsilon)
      .def_readonly("alphas", &ResonanceSpectrum::alphas)
      .def_readonly("residuals", &ResonanceSpectrum::residuals)
      .def_readonly("converged", &ResonanceSpectrum::converged)
      .def_readonly("warnings", &ResonanceSpectrum::warnings);
  m.def("dense_superoperator", &dense_superoperator, py::arg("channel"));
  m.def(
      "dense_spectrum",
      [](const Channel& ch) { return full_spectrum(dense_superoperator(ch), ch.epsilon()); }, py::arg("channel"));
  m.def("leading_nontrivial", &leading_nontrivial, py::arg("spectrum"));
  m.def(
      "krylov_leading",
      [](const Channel& ch, const Matrix& seed, int depth, int n_wanted) {
        KrylovOptions o;
        o.depth = depth;
        o.n_wanted = n_wanted;
        py::gil_scoped_release release;
        return krylov_leading(ch, seed, o);
      },
      py::arg("channel"), py::arg("seed"), py::arg("depth") = 40, py::arg("n_wanted") = 6);
  m.def("random_traceless_hermitian", &random_traceless_hermitian, py::arg("n"), py::arg("seed"));

  py::module_ r = m.def_submodule("runner", "Experiment runner writing CSV files and manifests");
  r.def("config_keys", &runner::config_keys);
  r.def(
      "run_otoc",
      [](const py::dict& settings) {
        const auto res = runner::run_otoc(make_config(settings));
        py::dict d;
        d["directory"] = res.directory;
        d["lambda"] = res.lambda;
        d["t_ehrenfest"] = res.t_ehrenfest;
        d["series"] = res.series;
        if (res.lyapunov_fit) d["lyapunov_fit"] = *res.lyapunov_fit;
        if (res.tail_fit) d["tail_fit"] = *res.tail_fit;
        return d;
      },
      py::arg("settings"));
  r.def(
      "run_sweep",
      [](const py::dict& settings) {
        py::list out;
        for (const auto& row : runner::run_sweep(make_config(settings))) {
          py::dict d;
          d["value"] = row.value;
          d["ok"] = row.ok;
          d["error"] = row.error;
          d["alpha"] = row.alpha;
          d["tail_r2"] = row.tail_r2;
          d["lambda"] = row.lambda;
          d["lyapunov_r2"] = row.lyapunov_r2;
          out.append(d);
        }
        return out;
      },
      py::arg("settings"));
  r.def(
      "run_resonances", [](const py::dict& settings) { return runner::run_resonances(make_config(settings)); },
      py::arg("settings"));
  r.def(
      "run_lyapunov", [](const py::dict& settings) { return runner::run_lyapunov(make_config(settings)); },
      py::arg("settings"));
}
