#include <cmath>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "otoclab/runner.hpp"

using namespace otoclab;
using namespace otoclab::runner;

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("-c,--config", inv.config_path, "key=value config file");
  cmd->add_option("--set", inv.sets, "extra key=value setting (repeatable)");
  for (const auto& key : config_keys()) cmd->add_option("--" + key, inv.flags[key], "config field " + key);
}

RunConfig resolve(const Invocation& inv) {
  RunConfig c;
  if (!inv.config_path.empty()) c = load_config(inv.config_path);
  for (const auto& [key, value] : inv.flags)
    if (!value.empty()) apply_setting(c, key, value);
  for (const auto& s : inv.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw RunError(ErrorKind::config, "--set expects key=value, got '" + s + "'");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  return c;
}

std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\t') ch = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"otoclab: out-of-time-order correlators and resonances of quantized torus maps"};
  app.set_version_flag("--version", OTOCLAB_VERSION);
  app.require_subcommand(1);

  Invocation inv;
  auto* otoc = app.add_subcommand("otoc", "OTOC time series with reference curves");
  auto* sweep = app.add_subcommand("sweep", "OTOC runs over a list of epsilon, k or N values");
  auto* res = app.add_subcommand("resonances", "Leading eigenvalues of the coarse-grained propagator");
  auto* lyap = app.add_subcommand("lyapunov", "Classical Lyapunov exponent");
  for (auto* cmd : {otoc, sweep, res, lyap}) add_common(cmd, inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error\tkind=usage\tmessage=" << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    const RunConfig c = resolve(inv);
    if (otoc->parsed()) {
      const auto r = run_otoc(c);
      std::cout << "wrote " << (r.directory / "otoc.csv").string() << "\n";
      if (r.lyapunov_fit) std::cout << "lyapunov_fit.lambda=" << format_number(r.lyapunov_fit->lambda) << "\n";
      if (r.tail_fit) std::cout << "tail_fit.alpha=" << format_number(r.tail_fit->alpha) << "\n";
    } else if (sweep->parsed()) {
      const auto rows = run_sweep(c);
      int failed = 0;
      for (const auto& r : rows) {
        std::cout << "value=" << format_number(r.value) << " status=" << (r.ok ? "ok" : "failed");
        if (r.ok) std::cout << " alpha=" << format_number(r.alpha) << " lambda=" << format_number(r.lambda);
        else std::cout << " error=" << one_line(r.error);
        std::cout << "\n";
        failed += r.ok ? 0 : 1;
      }
      if (failed) {
        std::cerr << "error\tkind=compute\tmessage=" << failed << " sweep runs failed\n";
        return 1;
      }
    } else if (res->parsed()) {
      const auto s = run_resonances(c);
      for (std::size_t i = 0; i < s.alphas.size() && i < 10; ++i)
        std::cout << i << " " << format_number(std::abs(s.alphas[i])) << " residual=" << format_number(s.residuals[i])
                  << "\n";
    } else if (lyap->parsed()) {
      const auto e = run_lyapunov(c);
      std::cout << "lambda=" << format_number(e.lambda) << " standard_error=" << format_number(e.standard_error)
                << "\n";
    }
  } catch (const RunError& e) {
    std::cerr << "error\tkind=" << to_string(e.kind()) << "\tmessage=" << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error\tkind=compute\tmessage=" << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
