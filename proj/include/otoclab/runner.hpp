#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otoclab/maps.hpp"
#include "otoclab/resonances.hpp"

namespace otoclab::runner {

// Failure categories reported by the command line tool.
enum class ErrorKind { config, io, compute };

class RunError : public std::runtime_error {
 public:
  RunError(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

std::string to_string(ErrorKind kind);

struct Window {
  int start = -1;
  int end = -1;
  bool set() const { return start >= 0; }
};

// Operators: A evolves, B stays fixed. "XP" is A = X, B = P; "F(a,b;c,d)"
// is A = F_(a,b), B = F_(c,d).
struct OperatorChoice {
  bool xp = true;
  PhaseVector a{0, 1};
  PhaseVector b{1, 0};
};

struct RunConfig {
  std::string map = "cat";
  int N = 256;
  double map_param = 0.0;
  double epsilon = 0.0;
  int t_max = 20;
  std::string operators = "XP";
  std::uint64_t seed = 1;
  std::string kick_mode = "correspondence";
  std::string outputs;

  Window tail_window;
  Window lyapunov_window;
  bool tail_envelope = false;

  std::string method = "krylov";
  int depth = 40;
  int n_wanted = 6;
  std::string krylov_seed = "X";

  std::string sweep_axis;
  std::vector<double> sweep_values;
  int jobs = 1;

  int n_traj = 2000;
  int t_horizon = 50;
};

// Keys in the order they are echoed into manifests.
const std::vector<std::string>& config_keys();

void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
std::string get_setting(const RunConfig& config, const std::string& key);

// key = value lines; '#' starts a comment; blank lines ignored.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Throws RunError(config) on the first invalid field.
void validate(const RunConfig& config);

ClassicalMapSpec map_spec(const RunConfig& config);
KickMode kick_mode(const RunConfig& config);
OperatorChoice operator_choice(const RunConfig& config);

// outputs, else $OTOCLAB_OUTPUT_ROOT/<command>, else otoclab_output/<command>.
std::filesystem::path output_dir(const RunConfig& config, const std::string& command);

// 17 significant digits, general notation.
std::string format_number(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string render() const;
};

// Write to a temporary sibling, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& content);

class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value) { set(key, format_number(value)); }
  void add_file(const std::string& name, const std::string& content);
  std::string render() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct OtocRunResult {
  std::filesystem::path directory;
  OtocSeries series;
  double lambda = 0.0;
  double t_ehrenfest = 0.0;
  std::optional<LyapunovFit> lyapunov_fit;
  std::optional<TailFit> tail_fit;
};

struct SweepRow {
  double value = 0.0;
  bool ok = false;
  std::string error;
  double alpha = 0.0;
  double tail_r2 = 0.0;
  double lambda = 0.0;
  double lyapunov_r2 = 0.0;
};

OtocRunResult run_otoc(const RunConfig& config);
std::vector<SweepRow> run_sweep(const RunConfig& config);
ResonanceSpectrum run_resonances(const RunConfig& config);
LyapunovEstimate run_lyapunov(const RunConfig& config);

}  // namespace otoclab::runner
