#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "otoclab/runner.hpp"

namespace otoclab::runner {
namespace {

using Clock = std::chrono::steady_clock;

const std::string kNan = "nan";

Channel build_channel(const RunConfig& c) {
  const TorusSpace space(c.N);
  auto map = quantize(map_spec(c), space, kick_mode(c));
  if (c.epsilon > 0.0) return Channel(std::move(map), build_kernel(space, c.epsilon));
  return Channel(std::move(map));
}

void echo_config(Manifest& m, const RunConfig& c, const std::string& command) {
  m.set("command", command);
  m.set("code_version", OTOCLAB_VERSION);
  for (const auto& key : config_keys()) m.set("config." + key, get_setting(c, key));
}

void finish_manifest(Manifest& m, Clock::time_point started, const std::filesystem::path& dir) {
  m.set("wall_clock_seconds", std::chrono::duration<double>(Clock::now() - started).count());
  write_atomic(dir / "manifest.txt", m.render());
}

bool is_linear_cat(const RunConfig& c) { return c.map == "cat" && c.map_param == 0.0; }

double classical_lambda(const RunConfig& c, std::vector<std::string>& notes) {
  if (is_linear_cat(c)) return cat_lyapunov_exponent();
  const auto est = lyapunov(map_spec(c), c.n_traj, c.t_horizon, c.seed);
  for (const auto& w : est.warnings) notes.push_back("lyapunov: " + w);
  return est.lambda;
}

}  // namespace

OtocRunResult run_otoc(const RunConfig& c) {
  validate(c);
  const auto started = Clock::now();
  OtocRunResult result;
  result.directory = output_dir(c, "otoc");

  const TorusSpace space(c.N);
  const Channel channel = build_channel(c);
  const auto ops = operator_choice(c);
  const OperatorMatrix a = ops.xp ? sine_position(space) : hermitian_f(space, ops.a);
  const OperatorMatrix b = ops.xp ? sine_momentum(space) : hermitian_f(space, ops.b);

  std::vector<std::string> notes;
  try {
    result.series = otoc_series(channel, a, b, c.t_max, c.operators);
  } catch (const std::invalid_argument& e) {
    throw RunError(ErrorKind::compute, e.what());
  }
  result.series.metadata.map = map_spec(c).label();
  const auto& s = result.series;

  result.lambda = classical_lambda(c, notes);
  if (result.lambda > 0.0) result.t_ehrenfest = ehrenfest_time(c.N, result.lambda);

  Window lw = c.lyapunov_window;
  if (!lw.set() && result.t_ehrenfest > 0.0) lw = {1, static_cast<int>(std::floor(result.t_ehrenfest)) - 1};
  if (lw.set() && lw.end > lw.start && lw.end <= c.t_max) {
    try {
      result.lyapunov_fit = fit_lyapunov_from_otoc(s, lw.start, lw.end);
      for (const auto& w : result.lyapunov_fit->warnings) notes.push_back("lyapunov_fit: " + w);
    } catch (const std::invalid_argument& e) {
      notes.push_back(std::string("lyapunov_fit skipped: ") + e.what());
    }
  } else {
    notes.push_back("lyapunov_fit skipped: window does not fit the series");
  }

  Window tw = c.tail_window;
  if (!tw.set() && result.t_ehrenfest > 0.0) tw = {static_cast<int>(std::ceil(result.t_ehrenfest)) + 2, c.t_max};
  if (tw.set() && tw.end - tw.start + 1 >= 4 && tw.end <= c.t_max) {
    try {
      result.tail_fit = fit_tail_rate(s, tw.start, tw.end, c.tail_envelope);
      for (const auto& w : result.tail_fit->warnings) notes.push_back("tail_fit: " + w);
    } catch (const std::invalid_argument& e) {
      notes.push_back(std::string("tail_fit skipped: ") + e.what());
    }
  } else {
    notes.push_back("tail_fit skipped: window does not fit the series");
  }

  CsvTable table;
  table.header = {"t", "C", "O1_re", "O1_im", "O1_abs", "O2", "ref_growth", "ref_decay", "C_exact", "O1_exact"};
  const bool exact = is_linear_cat(c);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int t = s.t[i];
    std::string growth = result.lambda > 0.0 ? format_number(s.c[0] * std::exp(2.0 * result.lambda * t)) : kNan;
    std::string decay = kNan;
    if (result.tail_fit) {
      const int t0 = result.tail_fit->t_start;
      decay = format_number(std::abs(s.o1[t0]) * std::pow(result.tail_fit->alpha, 2.0 * (t - t0)));
    }
    std::string c_exact = kNan, o1_exact = kNan;
    if (exact && ops.xp) {
      const auto an = analytic_cat_otoc(t, c.N);
      c_exact = format_number(an.c);
      o1_exact = format_number(an.o1);
    } else if (exact) {
      c_exact = format_number(otoc_family_linear(ops.b, ops.a, t, c.N));
    }
    table.add_row({std::to_string(t), format_number(s.c[i]), format_number(s.o1[i].real()),
                   format_number(s.o1[i].imag()), format_number(std::abs(s.o1[i])), format_number(s.o2[i]),
                   std::move(growth), std::move(decay), std::move(c_exact), std::move(o1_exact)});
  }
  const std::string csv = table.render();
  write_atomic(result.directory / "otoc.csv", csv);

  Manifest m;
  echo_config(m, c, "otoc");
  m.set("map_label", s.metadata.map);
  m.set("kernel.normalization", "unit_sum");
  if (channel.kernel()) m.set("kernel.clipped", channel.kernel()->clipped);
  m.set("derived.lambda", result.lambda);
  m.set("derived.t_ehrenfest", result.t_ehrenfest);
  if (result.lyapunov_fit) {
    m.set("derived.lyapunov_fit.lambda", result.lyapunov_fit->lambda);
    m.set("derived.lyapunov_fit.r_squared", result.lyapunov_fit->r_squared);
    m.set("derived.lyapunov_fit.window", std::to_string(lw.start) + "," + std::to_string(lw.end));
  }
  if (result.tail_fit) {
    m.set("derived.tail_fit.alpha", result.tail_fit->alpha);
    m.set("derived.tail_fit.r_squared", result.tail_fit->r_squared);
    m.set("derived.tail_fit.window", std::to_string(tw.start) + "," + std::to_string(tw.end));
  }
  for (std::size_t i = 0; i < notes.size(); ++i) m.set("note." + std::to_string(i), notes[i]);
  m.add_file("otoc.csv", csv);
  finish_manifest(m, started, result.directory);
  return result;
}

std::vector<SweepRow> run_sweep(const RunConfig& c) {
  if (c.sweep_axis.empty() || c.sweep_values.empty())
    throw RunError(ErrorKind::config,
                   "empty sweep; usage: sweep_axis=epsilon|k|N sweep_values=v1,v2,... (at least one value)");
  validate(c);
  const auto started = Clock::now();
  const auto dir = output_dir(c, "sweep");
  const std::size_t count = c.sweep_values.size();

  std::vector<SweepRow> rows(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      SweepRow& row = rows[i];
      row.value = c.sweep_values[i];
      try {
        RunConfig sub = c;
        sub.sweep_axis.clear();
        sub.sweep_values.clear();
        sub.outputs = (dir / ("run_" + std::to_string(i))).string();
        if (c.sweep_axis == "epsilon") sub.epsilon = row.value;
        else if (c.sweep_axis == "k") sub.map_param = row.value;
        else {
          if (row.value != std::floor(row.value)) throw RunError(ErrorKind::config, "N sweep values must be integers");
          sub.N = static_cast<int>(row.value);
        }
        const auto r = run_otoc(sub);
        row.lambda = r.lyapunov_fit ? r.lyapunov_fit->lambda : std::nan("");
        row.lyapunov_r2 = r.lyapunov_fit ? r.lyapunov_fit->r_squared : std::nan("");
        row.alpha = r.tail_fit ? r.tail_fit->alpha : std::nan("");
        row.tail_r2 = r.tail_fit ? r.tail_fit->r_squared : std::nan("");
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int jobs = std::min<int>(c.jobs, static_cast<int>(count));
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CsvTable table;
  table.header = {"index", "value", "status", "alpha", "tail_r2", "lambda", "lyapunov_r2"};
  Manifest m;
  echo_config(m, c, "sweep");
  for (std::size_t i = 0; i < count; ++i) {
    const auto& r = rows[i];
    table.add_row({std::to_string(i), format_number(r.value), r.ok ? "ok" : "failed", format_number(r.alpha),
                   format_number(r.tail_r2), format_number(r.lambda), format_number(r.lyapunov_r2)});
    m.set("run_" + std::to_string(i) + ".status", r.ok ? "ok" : "failed: " + r.error);
  }
  const std::string csv = table.render();
  write_atomic(dir / "summary.csv", csv);
  m.add_file("summary.csv", csv);
  finish_manifest(m, started, dir);
  return rows;
}

ResonanceSpectrum run_resonances(const RunConfig& c) {
  validate(c);
  const auto started = Clock::now();
  const auto dir = output_dir(c, "resonances");
  if (c.method == "dense" && c.N > 24) throw RunError(ErrorKind::config, "method=dense requires N <= 24");

  const Channel channel = build_channel(c);
  ResonanceSpectrum spec;
  if (c.method == "dense") {
    spec = full_spectrum(dense_superoperator(channel), c.epsilon);
  } else {
    const Matrix seed = c.krylov_seed == "X" ? sine_position(TorusSpace(c.N)).to_dense()
                                             : random_traceless_hermitian(c.N, c.seed);
    spec = krylov_leading(channel, seed, {c.depth, c.n_wanted});
  }

  CsvTable table;
  table.header = {"index", "alpha_re", "alpha_im", "alpha_abs", "residual", "converged"};
  for (std::size_t i = 0; i < spec.alphas.size(); ++i)
    table.add_row({std::to_string(i), format_number(spec.alphas[i].real()), format_number(spec.alphas[i].imag()),
                   format_number(std::abs(spec.alphas[i])), format_number(spec.residuals[i]),
                   spec.converged[i] ? "yes" : "no"});
  const std::string csv = table.render();
  write_atomic(dir / "resonances.csv", csv);

  Manifest m;
  echo_config(m, c, "resonances");
  m.set("map_label", map_spec(c).label());
  m.set("kernel.normalization", "unit_sum");
  const int lead = leading_nontrivial(spec);
  if (lead < static_cast<int>(spec.alphas.size())) m.set("derived.alpha1_abs", std::abs(spec.alphas[lead]));
  m.set("derived.near_degenerate_count", std::to_string(spec.near_degenerate.size()));
  for (std::size_t i = 0; i < spec.warnings.size(); ++i) m.set("note." + std::to_string(i), spec.warnings[i]);
  m.add_file("resonances.csv", csv);
  finish_manifest(m, started, dir);
  return spec;
}

LyapunovEstimate run_lyapunov(const RunConfig& c) {
  validate(c);
  const auto started = Clock::now();
  const auto dir = output_dir(c, "lyapunov");
  const auto spec = map_spec(c);
  const auto est = lyapunov(spec, c.n_traj, c.t_horizon, c.seed);

  CsvTable table;
  table.header = {"map",    "map_param",      "n_traj",      "t_horizon", "warmup", "seed", "lambda",
                  "lambda_generalized", "standard_error", "n_resampled", "t_ehrenfest"};
  const std::string te = est.lambda > 0.0 ? format_number(ehrenfest_time(c.N, est.lambda)) : kNan;
  table.add_row({c.map, format_number(c.map_param), std::to_string(est.n_trajectories), std::to_string(est.t_horizon),
                 std::to_string(est.warmup), std::to_string(est.seed), format_number(est.lambda),
                 format_number(est.lambda_generalized), format_number(est.standard_error),
                 std::to_string(est.n_resampled), te});
  const std::string csv = table.render();
  write_atomic(dir / "lyapunov.csv", csv);

  Manifest m;
  echo_config(m, c, "lyapunov");
  m.set("derived.lambda", est.lambda);
  for (std::size_t i = 0; i < est.warnings.size(); ++i) m.set("note." + std::to_string(i), est.warnings[i]);
  m.add_file("lyapunov.csv", csv);
  finish_manifest(m, started, dir);
  return est;
}

}  // namespace otoclab::runner
