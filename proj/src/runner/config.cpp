#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "otoclab/runner.hpp"

namespace otoclab::runner {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw RunError(ErrorKind::config, key + "=" + value + ": " + why);
}

template <class T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto* first = value.data();
  const auto* last = first + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad(key, value, "expected an integer");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* first = value.data();
  const auto* last = first + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) bad(key, value, "expected a finite number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad(key, value, "expected true or false");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

Window parse_window(const std::string& key, const std::string& value) {
  if (value.empty() || value == "auto") return {};
  const auto parts = split(value, ',');
  if (parts.size() != 2) bad(key, value, "expected start,end");
  Window w{parse_integer<int>(key, parts[0]), parse_integer<int>(key, parts[1])};
  if (w.start < 0 || w.end <= w.start) bad(key, value, "expected 0 <= start < end");
  return w;
}

std::string show_window(const Window& w) {
  if (!w.set()) return "auto";
  return std::to_string(w.start) + "," + std::to_string(w.end);
}

}  // namespace

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::compute: return "compute";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "map",       "N",           "map_param",    "epsilon",   "t_max",       "operators",  "seed",
      "kick_mode", "outputs",     "tail_window",  "lyapunov_window", "tail_envelope", "method", "depth",
      "n_wanted",  "krylov_seed", "sweep_axis",   "sweep_values", "jobs",     "n_traj",     "t_horizon"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "map") c.map = value;
  else if (key == "N") c.N = parse_integer<int>(key, value);
  else if (key == "map_param") c.map_param = parse_real(key, value);
  else if (key == "epsilon") c.epsilon = parse_real(key, value);
  else if (key == "t_max") c.t_max = parse_integer<int>(key, value);
  else if (key == "operators") c.operators = value;
  else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "kick_mode") c.kick_mode = value;
  else if (key == "outputs") c.outputs = value;
  else if (key == "tail_window") c.tail_window = parse_window(key, value);
  else if (key == "lyapunov_window") c.lyapunov_window = parse_window(key, value);
  else if (key == "tail_envelope") c.tail_envelope = parse_bool(key, value);
  else if (key == "method") c.method = value;
  else if (key == "depth") c.depth = parse_integer<int>(key, value);
  else if (key == "n_wanted") c.n_wanted = parse_integer<int>(key, value);
  else if (key == "krylov_seed") c.krylov_seed = value;
  else if (key == "sweep_axis") c.sweep_axis = value;
  else if (key == "sweep_values") {
    c.sweep_values.clear();
    if (!value.empty())
      for (const auto& part : split(value, ',')) c.sweep_values.push_back(parse_real(key, part));
  } else if (key == "jobs") c.jobs = parse_integer<int>(key, value);
  else if (key == "n_traj") c.n_traj = parse_integer<int>(key, value);
  else if (key == "t_horizon") c.t_horizon = parse_integer<int>(key, value);
  else throw RunError(ErrorKind::config, "unknown key '" + key + "'");
}

std::string get_setting(const RunConfig& c, const std::string& key) {
  if (key == "map") return c.map;
  if (key == "N") return std::to_string(c.N);
  if (key == "map_param") return format_number(c.map_param);
  if (key == "epsilon") return format_number(c.epsilon);
  if (key == "t_max") return std::to_string(c.t_max);
  if (key == "operators") return c.operators;
  if (key == "seed") return std::to_string(c.seed);
  if (key == "kick_mode") return c.kick_mode;
  if (key == "outputs") return c.outputs;
  if (key == "tail_window") return show_window(c.tail_window);
  if (key == "lyapunov_window") return show_window(c.lyapunov_window);
  if (key == "tail_envelope") return c.tail_envelope ? "true" : "false";
  if (key == "method") return c.method;
  if (key == "depth") return std::to_string(c.depth);
  if (key == "n_wanted") return std::to_string(c.n_wanted);
  if (key == "krylov_seed") return c.krylov_seed;
  if (key == "sweep_axis") return c.sweep_axis;
  if (key == "sweep_values") {
    std::string s;
    for (std::size_t i = 0; i < c.sweep_values.size(); ++i) s += (i ? "," : "") + format_number(c.sweep_values[i]);
    return s;
  }
  if (key == "jobs") return std::to_string(c.jobs);
  if (key == "n_traj") return std::to_string(c.n_traj);
  if (key == "t_horizon") return std::to_string(c.t_horizon);
  throw RunError(ErrorKind::config, "unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw RunError(ErrorKind::config, "line " + std::to_string(number) + ": expected key=value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunError(ErrorKind::io, "cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), std::move(base));
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw RunError(ErrorKind::config, msg); };
  if (c.map != "cat" && c.map != "standard" && c.map != "harper") fail("map must be cat, standard or harper");
  if (c.N < 2) fail("N must be >= 2");
  if (c.N > 8192) fail("N must be <= 8192");
  if (!(c.epsilon >= 0.0)) fail("epsilon must be >= 0");
  if (c.t_max < 0) fail("t_max must be >= 0");
  if (c.kick_mode != "correspondence" && c.kick_mode != "as_printed")
    fail("kick_mode must be correspondence or as_printed");
  (void)operator_choice(c);
  if (c.tail_window.set() && c.tail_window.end - c.tail_window.start + 1 < 4)
    fail("tail_window must hold at least 4 points");
  if (c.method != "dense" && c.method != "krylov") fail("method must be dense or krylov");
  if (c.n_wanted < 1) fail("n_wanted must be >= 1");
  if (c.depth < c.n_wanted + 2) fail("depth must be >= n_wanted + 2");
  if (c.krylov_seed != "X" && c.krylov_seed != "random") fail("krylov_seed must be X or random");
  if (!c.sweep_axis.empty() && c.sweep_axis != "epsilon" && c.sweep_axis != "k" && c.sweep_axis != "N")
    fail("sweep_axis must be epsilon, k or N");
  if (c.jobs < 1) fail("jobs must be >= 1");
  if (c.n_traj < 1) fail("n_traj must be >= 1");
  if (c.t_horizon < 10) fail("t_horizon must be >= 10");
}

ClassicalMapSpec map_spec(const RunConfig& c) {
  if (c.map == "cat") return ClassicalMapSpec::cat(c.map_param);
  if (c.map == "standard") return ClassicalMapSpec::standard(c.map_param);
  if (c.map == "harper") return ClassicalMapSpec::harper(c.map_param);
  throw RunError(ErrorKind::config, "unknown map '" + c.map + "'");
}

KickMode kick_mode(const RunConfig& c) {
  return c.kick_mode == "as_printed" ? KickMode::as_printed : KickMode::correspondence;
}

OperatorChoice operator_choice(const RunConfig& c) {
  if (c.operators == "XP") return {};
  const std::string& s = c.operators;
  if (s.size() < 4 || s[0] != 'F' || s[1] != '(' || s.back() != ')')
    throw RunError(ErrorKind::config, "operators must be XP or F(aq,ap;bq,bp)");
  std::string body = s.substr(2, s.size() - 3);
  for (auto& ch : body)
    if (ch == ';') ch = ',';
  const auto parts = split(body, ',');
  if (parts.size() != 4) throw RunError(ErrorKind::config, "operators must be XP or F(aq,ap;bq,bp)");
  OperatorChoice o;
  o.xp = false;
  o.a = {parse_integer<std::int64_t>("operators", parts[0]), parse_integer<std::int64_t>("operators", parts[1])};
  o.b = {parse_integer<std::int64_t>("operators", parts[2]), parse_integer<std::int64_t>("operators", parts[3])};
  return o;
}

std::filesystem::path output_dir(const RunConfig& c, const std::string& command) {
  if (!c.outputs.empty()) return c.outputs;
  if (const char* root = std::getenv("OTOCLAB_OUTPUT_ROOT"); root && *root)
    return std::filesystem::path(root) / command;
  return std::filesystem::path("otoclab_output") / command;
}

}  // namespace otoclab::runner
