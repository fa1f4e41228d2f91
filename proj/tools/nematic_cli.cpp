// nematic2d: simulate, relax, verify, rate, director.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nematic/config.hpp"
#include "nematic/csv.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/energetics.hpp"
#include "nematic/initial_conditions.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/stepper.hpp"
#include "nematic/verify.hpp"

namespace fs = std::filesystem;
using namespace nematic;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitBlowUp = 3;

struct Common {
  std::string config_path;
  std::string output;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Common& opts) {
  RunConfig config = opts.config_path.empty() ? parse_config("") : load_config(opts.config_path);
  if (!opts.output.empty()) config.output_dir = opts.output;
  if (opts.seed) apply_seed(config, *opts.seed);
  fs::create_directories(config.output_dir);
  return config;
}

SimState initial_state(const RunConfig& config) {
  if (!config.initial_snapshot.empty()) {
    return snapshot::read_snapshot(config.initial_snapshot, Grid(config.grid_n));
  }
  return initial::make_initial_state(config);
}

std::string snapshot_name(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%08zu.bin", step);
  return buf;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

int cmd_simulate(const Common& opts) {
  const RunConfig config = load(opts);
  const fs::path dir = config.output_dir;
  const SimState state = initial_state(config);
  std::optional<QTensorField> reference;
  if (!config.reference_qinf.empty()) {
    reference = snapshot::read_snapshot(config.reference_qinf, state.grid()).Q;
  }

  if (!config.stepper.adaptive) {
    stepper::StepperConfig unbounded = config.stepper;
    unbounded.dt = std::numeric_limits<double>::infinity();
    const double bound = stepper::cfl_dt(stepper::prepare(state), config.params, unbounded);
    if (config.stepper.dt > bound) {
      std::cerr << "warning: dt = " << config.stepper.dt << " exceeds the stability estimate " << bound
                << " of the initial state; consider adaptive = true\n";
    }
  }

  csv::DiagnosticsWriter writer((dir / "diagnostics.csv").string());
  std::size_t samples = 0;
  bool equilibrium = false;
  auto observer = [&](const SimState& s, const DiagnosticsRow& row) {
    writer.write(row);
    const std::size_t step = samples * config.stepper.sample_every;
    ++samples;
    if (config.snapshot_every > 0 && step % config.snapshot_every == 0) {
      snapshot::write_snapshot((dir / snapshot_name(step)).string(), s);
    }
    if (config.stop_at_equilibrium &&
        diagnostics::omega_limit_check(s, config.params, config.equilibrium_tol_u, config.equilibrium_tol_H)) {
      equilibrium = true;
      return true;
    }
    return false;
  };
  auto checkpoint = [&](const SimState& s) {
    snapshot::write_snapshot((dir / "checkpoint.bin").string(), s);
  };
  try {
    const auto result = stepper::run(state, config.params, config.stepper, observer, checkpoint,
                                     reference ? &*reference : nullptr);
    snapshot::write_snapshot((dir / "final.bin").string(), result.state);
    std::cout << "steps " << result.steps << "  t " << result.state.t << "  rows " << writer.rows()
              << (equilibrium ? "  equilibrium reached" : "") << '\n';
    return 0;
  } catch (const stepper::BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << " (term " << e.term() << "); checkpoint written to "
              << (dir / "checkpoint.bin").string() << '\n';
    return kExitBlowUp;
  }
}

int cmd_relax(const Common& opts) {
  const RunConfig config = load(opts);
  const fs::path dir = config.output_dir;
  const SimState start = initial_state(config);
  const auto result =
      energetics::relax_to_equilibrium(start.Q, config.params, config.relax_tol, config.relax_max_steps);
  const SimState out(0.0, VelocityField(start.grid()), result.Q);
  const std::string name = result.converged ? "qinf.bin" : "relax_partial.bin";
  snapshot::write_snapshot((dir / name).string(), out);

  nlohmann::ordered_json j;
  j["converged"] = result.converged;
  j["energy_monotone"] = result.energy_monotone;
  j["residual"] = result.residual;
  j["steps"] = result.steps;
  j["free_energy_initial"] = result.energies.front();
  j["free_energy_final"] = result.energies.back();
  j["snapshot"] = name;
  write_json(dir / "relax.json", j);
  std::cout << "residual " << result.residual << "  steps " << result.steps
            << (result.converged ? "  converged" : "  not converged")
            << (result.energy_monotone ? "" : "  energy not monotone") << '\n';
  return result.converged && result.energy_monotone ? 0 : kExitNotConverged;
}

int cmd_verify(const Common& opts) {
  const RunConfig config = load(opts);
  const auto report = verify::run_suite(config);
  const fs::path path = fs::path(config.output_dir) / "verify_report.json";
  std::ofstream(path) << report.to_json() << '\n';
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    for (const auto& [k, v] : c.measured) std::cout << "  " << k << "=" << v;
    std::cout << '\n';
  }
  std::cout << "report: " << path.string() << '\n';
  return report.passed() ? 0 : kExitFailure;
}

// Rows from the last maximum of y onwards, above `floor` times that maximum.
void decay_window(const std::vector<double>& t, const std::vector<double>& y, double floor,
                  std::vector<double>& wt, std::vector<double>& wy) {
  if (y.empty()) return;
  const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
  const double ymax = y[peak];
  for (std::size_t i = peak; i < y.size(); ++i) {
    if (y[i] > floor * ymax) {
      wt.push_back(t[i]);
      wy.push_back(y[i]);
    }
  }
}

nlohmann::ordered_json fit_json(const diagnostics::RateFit& f, std::size_t samples) {
  nlohmann::ordered_json j;
  j["samples"] = samples;
  j["refused"] = f.refused;
  if (f.refused) {
    j["reason"] = f.reason;
    return j;
  }
  j["theta_hat"] = number_or_null(f.theta_hat);
  j["theta_in_theory"] = f.theta_in_theory;
  j["polynomial_slope"] = number_or_null(f.poly_slope);
  j["exponential_rate"] = number_or_null(f.exp_rate);
  j["polynomial_residual"] = number_or_null(f.poly_residual);
  j["exponential_residual"] = number_or_null(f.exp_residual);
  j["model_preference"] = f.preference;
  return j;
}

int cmd_rate(const std::string& csv_path, const std::string& qinf_path, std::string output, double floor) {
  const auto rows = csv::read_diagnostics(csv_path);
  const SimState qinf_state = snapshot::read_snapshot(qinf_path);
  const QTensorField& qinf = qinf_state.Q;

  std::vector<double> t, a, dist;
  for (const auto& r : rows) {
    t.push_back(r.t);
    a.push_back(r.A);
    dist.push_back(r.Q_minus_Qinf_H2);
  }
  const bool have_column = std::none_of(dist.begin(), dist.end(), [](double v) { return std::isnan(v); });
  std::vector<double> dt_snap, dist_snap;
  if (!have_column) {
    // Fall back to the snapshots written next to the CSV.
    const fs::path dir = fs::path(csv_path).parent_path();
    std::vector<fs::path> snaps;
    const std::regex pattern("snap_[0-9]+\\.bin");
    if (fs::exists(dir.empty() ? "." : dir)) {
      for (const auto& e : fs::directory_iterator(dir.empty() ? "." : dir)) {
        if (std::regex_match(e.path().filename().string(), pattern)) snaps.push_back(e.path());
      }
    }
    std::sort(snaps.begin(), snaps.end());
    for (const auto& p : snaps) {
      const SimState s = snapshot::read_snapshot(p.string(), qinf.grid());
      dt_snap.push_back(s.t);
      dist_snap.push_back(diagnostics::q_h2_distance(s.Q, qinf));
    }
  } else {
    dt_snap = t;
    dist_snap = dist;
  }

  std::vector<double> ta, ya, tq, yq;
  decay_window(t, a, floor, ta, ya);
  decay_window(dt_snap, dist_snap, floor, tq, yq);
  const auto fit_a = diagnostics::fit_convergence_rate(ta, ya, 2);
  const auto fit_q = diagnostics::fit_convergence_rate(tq, yq, 1);

  nlohmann::ordered_json j;
  j["csv"] = csv_path;
  j["qinf"] = qinf_path;
  j["A"] = fit_json(fit_a, ta.size());
  j["Q_minus_Qinf_H2"] = fit_json(fit_q, tq.size());
  if (output.empty()) output = fs::path(csv_path).parent_path().string();
  if (output.empty()) output = ".";
  fs::create_directories(output);
  const fs::path path = fs::path(output) / "rate_report.json";
  write_json(path, j);
  std::cout << j.dump(2) << '\n';
  return fit_a.refused || fit_q.refused ? kExitFailure : 0;
}

int cmd_director(const std::string& snapshot_path, const std::string& output) {
  const SimState s = snapshot::read_snapshot(snapshot_path);
  const DirectorField d = director_decompose(s.Q);
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot open " + output);
  out << "i,j,p,q,s,theta\n";
  const int n = s.grid().n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << i << ',' << j << ',' << csv::format_double(s.Q.p(i, j)) << ',' << csv::format_double(s.Q.q(i, j))
          << ',' << csv::format_double(d.s(i, j)) << ',' << csv::format_double(d.theta(i, j)) << '\n';
    }
  }
  return 0;
}

void add_common(CLI::App* sub, Common& opts) {
  sub->add_option("--config", opts.config_path, "config file (flat key = value)");
  sub->add_option("--output", opts.output, "output directory, overrides output_dir");
  sub->add_option("--seed", opts.seed, "velocity seed N, Q seed N+1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral Navier-Stokes / Q-tensor solver on the periodic unit square"};
  app.require_subcommand(1);

  Common sim_opts, relax_opts, verify_opts;
  auto* sim = app.add_subcommand("simulate", "run the coupled system and write diagnostics.csv and snapshots");
  add_common(sim, sim_opts);
  auto* relax = app.add_subcommand("relax", "gradient-flow relaxation of Q to an equilibrium");
  add_common(relax, relax_opts);
  auto* ver = app.add_subcommand("verify", "run the property suite and write verify_report.json");
  add_common(ver, verify_opts);

  std::string rate_csv, rate_qinf, rate_out;
  double rate_floor = 1e-12;
  auto* rate = app.add_subcommand("rate", "fit convergence rates to a diagnostics CSV");
  rate->add_option("--csv", rate_csv, "diagnostics CSV")->required();
  rate->add_option("--qinf", rate_qinf, "equilibrium snapshot")->required();
  rate->add_option("--output", rate_out, "report directory (default: next to the CSV)");
  rate->add_option("--floor", rate_floor, "ignore samples below floor * max (round-off plateau)");

  std::string dir_snap, dir_out;
  auto* director = app.add_subcommand("director", "export (p, q, s, theta) of a snapshot as CSV");
  director->add_option("--snapshot", dir_snap)->required();
  director->add_option("--output", dir_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(sim_opts);
    if (*relax) return cmd_relax(relax_opts);
    if (*ver) return cmd_verify(verify_opts);
    if (*rate) return cmd_rate(rate_csv, rate_qinf, rate_out, rate_floor);
    if (*director) return cmd_director(dir_snap, dir_out);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
