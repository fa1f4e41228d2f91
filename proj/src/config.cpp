#include "nematic/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nematic {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& v, double& out) {
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

template <class Int>
bool parse_int(const std::string& v, Int& out) {
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1" || v == "yes") {
    out = true;
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    out = false;
    return true;
  }
  return false;
}

using Setter = std::function<bool(const std::string&, RunConfig&)>;

template <class F>
Setter real(F field) {
  return [field](const std::string& v, RunConfig& c) { return parse_double(v, field(c)); };
}

template <class F>
Setter integer(F field) {
  return [field](const std::string& v, RunConfig& c) { return parse_int(v, field(c)); };
}

template <class F>
Setter boolean(F field) {
  return [field](const std::string& v, RunConfig& c) { return parse_bool(v, field(c)); };
}

template <class F>
Setter text(F field) {
  return [field](const std::string& v, RunConfig& c) {
    field(c) = v;
    return true;
  };
}

#define FIELD(expr) [](RunConfig & c) -> auto& { return expr; }

const std::map<std::string, std::pair<Setter, const char*>>& schema() {
  static const std::map<std::string, std::pair<Setter, const char*>> keys = {
      {"nu", {real(FIELD(c.params.nu)), "number"}},
      {"lambda", {real(FIELD(c.params.lambda)), "number"}},
      {"gamma", {real(FIELD(c.params.gamma)), "number"}},
      {"L", {real(FIELD(c.params.L)), "number"}},
      {"a", {real(FIELD(c.params.a)), "number"}},
      {"c", {real(FIELD(c.params.c)), "number"}},
      {"xi", {real(FIELD(c.params.xi)), "number"}},
      {"flip_tau_sign", {boolean(FIELD(c.params.corrupt_tau_sign)), "boolean"}},
      {"grid_n", {integer(FIELD(c.grid_n)), "integer"}},
      {"dt", {real(FIELD(c.stepper.dt)), "number"}},
      {"cfl", {real(FIELD(c.stepper.cfl)), "number"}},
      {"adaptive", {boolean(FIELD(c.stepper.adaptive)), "boolean"}},
      {"t_end", {real(FIELD(c.stepper.t_end)), "number"}},
      {"scheme",
       {[](const std::string& v, RunConfig& c) {
          const auto s = stepper::parse_scheme(v);
          if (s) c.stepper.scheme = *s;
          return s.has_value();
        },
        "one of euler, ars222"}},
      {"implicit_coupling", {boolean(FIELD(c.stepper.implicit_coupling)), "boolean"}},
      {"diagnostics_every", {integer(FIELD(c.stepper.sample_every)), "integer"}},
      {"snapshot_every", {integer(FIELD(c.snapshot_every)), "integer"}},
      {"output_dir", {text(FIELD(c.output_dir)), "path"}},
      {"velocity_ic",
       {[](const std::string& v, RunConfig& c) {
          static const std::map<std::string, VelocityInit> names = {
              {"taylor_green", VelocityInit::taylor_green},
              {"random_smooth", VelocityInit::random_smooth},
              {"quiescent", VelocityInit::quiescent}};
          const auto it = names.find(v);
          if (it != names.end()) c.initial.velocity = it->second;
          return it != names.end();
        },
        "one of taylor_green, random_smooth, quiescent"}},
      {"velocity_seed", {integer(FIELD(c.initial.velocity_seed)), "integer"}},
      {"velocity_amplitude", {real(FIELD(c.initial.velocity_amplitude)), "number"}},
      {"spectrum_decay", {real(FIELD(c.initial.spectrum_decay)), "number"}},
      {"velocity_band", {integer(FIELD(c.initial.velocity_band)), "integer"}},
      {"q_ic",
       {[](const std::string& v, RunConfig& c) {
          static const std::map<std::string, QInit> names = {
              {"random_q", QInit::random_q},
              {"constant_q", QInit::constant_q},
              {"perturbed_equilibrium", QInit::perturbed_equilibrium}};
          const auto it = names.find(v);
          if (it != names.end()) c.initial.q = it->second;
          return it != names.end();
        },
        "one of random_q, constant_q, perturbed_equilibrium"}},
      {"q_seed", {integer(FIELD(c.initial.q_seed)), "integer"}},
      {"q_amplitude", {real(FIELD(c.initial.q_amplitude)), "number"}},
      {"q_band", {integer(FIELD(c.initial.q_band)), "integer"}},
      {"q_p", {real(FIELD(c.initial.q_p)), "number"}},
      {"q_q", {real(FIELD(c.initial.q_q)), "number"}},
      {"q_angle", {real(FIELD(c.initial.q_angle)), "number"}},
      {"relax_tol", {real(FIELD(c.relax_tol)), "number"}},
      {"relax_max_steps", {integer(FIELD(c.relax_max_steps)), "integer"}},
      {"stop_at_equilibrium", {boolean(FIELD(c.stop_at_equilibrium)), "boolean"}},
      {"equilibrium_tol_u", {real(FIELD(c.equilibrium_tol_u)), "number"}},
      {"equilibrium_tol_H", {real(FIELD(c.equilibrium_tol_H)), "number"}},
      {"reference_qinf", {text(FIELD(c.reference_qinf)), "path"}},
      {"initial_snapshot", {text(FIELD(c.initial_snapshot)), "path"}},
      {"verify_grid_n", {integer(FIELD(c.verify_grid_n)), "integer"}},
  };
  return keys;
}

#undef FIELD

void check_grid(int n, const char* key, std::vector<std::string>& errors) {
  if (n < 8 || n % 2 != 0) {
    errors.push_back(std::string(key) + " must be even and at least 8 (got " + std::to_string(n) + ")");
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errors = c.params.validate();
  for (auto& e : c.stepper.validate()) errors.push_back(std::move(e));
  check_grid(c.grid_n, "grid_n", errors);
  check_grid(c.verify_grid_n, "verify_grid_n", errors);
  const InitialCondition& ic = c.initial;
  if (!(ic.velocity_amplitude >= 0.0)) errors.push_back("velocity_amplitude must be non-negative");
  if (!(ic.q_amplitude >= 0.0)) errors.push_back("q_amplitude must be non-negative");
  if (ic.velocity_band < 1) errors.push_back("velocity_band must be at least 1");
  if (ic.q_band < 1) errors.push_back("q_band must be at least 1");
  if (!(c.relax_tol > 0.0)) errors.push_back("relax_tol must be positive");
  if (!(c.equilibrium_tol_u > 0.0)) errors.push_back("equilibrium_tol_u must be positive");
  if (!(c.equilibrium_tol_H > 0.0)) errors.push_back("equilibrium_tol_H must be positive");
  if (c.snapshot_every > 0 && c.stepper.sample_every > 0 && c.snapshot_every % c.stepper.sample_every != 0) {
    errors.push_back("snapshot_every must be a multiple of diagnostics_every");
  }
  if (c.output_dir.empty()) errors.push_back("output_dir must not be empty");
  return errors;
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(number) + ": ";
    if (eq == std::string::npos) {
      errors.push_back(where + "expected `key = value`");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = schema().find(key);
    if (it == schema().end()) {
      errors.push_back(where + "unknown key `" + key + "`");
      continue;
    }
    if (!seen.insert(key).second) {
      errors.push_back(where + "duplicate key `" + key + "`");
      continue;
    }
    if (!it->second.first(value, config)) {
      errors.push_back(where + "`" + key + "` expects " + it->second.second + ", got `" + value + "`");
    }
  }
  for (auto& e : validate(config)) errors.push_back(std::move(e));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file " + path});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_seed(RunConfig& config, std::uint64_t seed) {
  config.initial.velocity_seed = seed;
  config.initial.q_seed = seed + 1;
}

}  // namespace nematic
