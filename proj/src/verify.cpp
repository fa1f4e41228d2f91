#include "nematic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "nematic/coupling.hpp"
#include "nematic/energetics.hpp"
#include "nematic/initial_conditions.hpp"
#include "nematic/spectral.hpp"

namespace nematic::verify {

namespace sp = nematic::spectral;

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [key, value] : c.measured) {
      if (std::isfinite(value)) {
        m[key] = value;
      } else {
        m[key] = nullptr;
      }
    }
    entry["measured"] = m;
    if (!c.detail.empty()) entry["detail"] = c.detail;
    j["checks"].push_back(entry);
  }
  return j.dump(2);
}

SimState band_limited_state(const Grid& grid, const Parameters& params, std::uint64_t seed, int u_band,
                            int q_band) {
  std::mt19937_64 rng(seed);
  const std::uint64_t useed = rng();
  const std::uint64_t qseed = rng();
  const double angle = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
  VelocityField u = initial::random_smooth_velocity(grid, useed, 1.0, 1.0, u_band);
  QTensorField Q = initial::perturbed_equilibrium(grid, params, angle, qseed, 0.3, 1.0, q_band);
  return SimState(0.0, std::move(u), std::move(Q));
}

std::vector<EnergyLawPoint> energy_law_sweep(const SimState& initial, const Parameters& params,
                                             const std::vector<double>& dts, double window,
                                             const stepper::StepOptions& options) {
  std::vector<EnergyLawPoint> out;
  for (double dt : dts) {
    const auto steps = static_cast<std::size_t>(std::llround(window / dt));
    SimState s = stepper::prepare(initial);
    std::vector<double> energy, diss;
    energy.reserve(steps + 1);
    diss.reserve(steps + 1);
    for (std::size_t k = 0;; ++k) {
      energy.push_back(diagnostics::total_energy(s, params).total);
      diss.push_back(diagnostics::dissipation(s, params));
      if (k == steps) break;
      s = stepper::step(s, dt, params, options);
    }
    out.push_back({dt, diagnostics::energy_law_residual(energy, diss, dt).max_relative});
  }
  return out;
}

std::vector<IdentityPoint> identity_sweep(const SimState& state, const Parameters& params,
                                          const std::vector<double>& dt_probes) {
  std::vector<IdentityPoint> out;
  for (double h : dt_probes) out.push_back({h, diagnostics::identity_residual(state, params, h)});
  return out;
}

double variational_consistency(const Grid& grid, const Parameters& params, std::uint64_t seed, int pairs,
                               double eps) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const QTensorField Q = initial::perturbed_equilibrium(grid, params, 0.3 * k, rng(), 0.4, 1.0, 4);
    const QTensorField dQ = initial::random_q(grid, rng(), 1.0, 1.0, 4);
    const QTensorField H = energetics::molecular_field(Q, params);
    QTensorField plus = dQ;
    plus *= eps;
    plus += Q;
    QTensorField minus = dQ;
    minus *= -eps;
    minus += Q;
    const double fd = (energetics::free_energy(plus, params) - energetics::free_energy(minus, params)) / (2.0 * eps);
    const double pairing = -inner(H, dQ);
    worst = std::max(worst, std::abs(pairing - fd) / (1.0 + std::abs(fd)));
  }
  return worst;
}

bool decays(const std::vector<double>& values, double ratio) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] <= ratio * values[k - 1])) return false;
  }
  return true;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Check energy_law_check(const RunConfig& config, const Grid& grid) {
  RunConfig local = config;
  local.grid_n = grid.n();
  const SimState initial = initial::make_initial_state(local);
  const auto sweep = energy_law_sweep(initial, config.params, {1e-3, 5e-4, 2.5e-4}, 0.05,
                                      {config.stepper.scheme, config.stepper.implicit_coupling});
  Check c;
  c.name = "energy_law";
  std::vector<double> values;
  for (const auto& p : sweep) {
    c.measured.push_back({"max_relative_residual_dt_" + fmt(p.dt), p.max_relative});
    values.push_back(p.max_relative);
  }
  c.passed = decays(values, 0.6) && values.back() <= 1e-3;
  c.detail = "ratio <= 0.6 per halving of dt and <= 1e-3 at dt = 2.5e-4";
  return c;
}

Check identity_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "identity";
  bool ok = true;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SimState state = band_limited_state(grid, config.params, config.initial.velocity_seed * 1000 + s);
    const auto sweep = identity_sweep(state, config.params, {1e-4, 5e-5, 2.5e-5});
    std::vector<double> r;
    for (const auto& p : sweep) r.push_back(p.residual.residual);
    c.measured.push_back({"state" + std::to_string(s) + "_residual_finest", r.back()});
    c.measured.push_back({"state" + std::to_string(s) + "_residual_coarsest", r.front()});
    ok = ok && r.back() <= 1e-3 && decays(r, 0.6);
  }
  c.passed = ok;
  c.detail = "residual <= 1e-3 at dt_probe = 2.5e-5 and decaying under refinement";
  return c;
}

Check xi0_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "xi0_reduction";
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SimState state = band_limited_state(grid, config.params, 77 + s);
    const auto terms = diagnostics::identity_terms(state, config.params);
    for (int i = 5; i <= 8; ++i) worst = std::max(worst, std::abs(terms.J[i]));
  }
  c.measured.push_back({"max_abs_J6_to_J9", worst});
  c.passed = worst <= 1e-12;
  return c;
}

Check variational_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "variational_consistency";
  const double worst = variational_consistency(grid, config.params, config.initial.q_seed, 20, 1e-4);
  c.measured.push_back({"max_relative_error", worst});
  c.passed = worst <= 1e-6;
  return c;
}

Check projection_check(const Grid& grid, std::uint64_t seed) {
  Check c;
  c.name = "projection";
  VelocityField u(initial::random_smooth_scalar(grid, seed, 1.0, grid.n() / 3, true),
                  initial::random_smooth_scalar(grid, seed + 1, 1.0, grid.n() / 3, true));
  const VelocityField pu = sp::leray_project(u);
  const VelocityField ppu = sp::leray_project(pu);
  const double div = sp::max_divergence(pu) / std::max(1.0, pu.l2_norm());
  double idem = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    idem = std::max({idem, std::abs(ppu.u1[k] - pu.u1[k]), std::abs(ppu.u2[k] - pu.u2[k])});
  }
  c.measured.push_back({"relative_divergence", div});
  c.measured.push_back({"idempotency_error", idem});
  c.passed = div <= 1e-12 && idem <= 1e-12;
  return c;
}

Check derivative_check(const Grid& grid) {
  Check c;
  c.name = "spectral_derivative";
  ScalarField f(grid), expected(grid);
  const double tp = 2.0 * std::numbers::pi;
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) {
      const double x = grid.coordinate(i), y = grid.coordinate(j);
      f(i, j) = std::sin(tp * x) * std::cos(2 * tp * y);
      expected(i, j) = tp * std::cos(tp * x) * std::cos(2 * tp * y);
    }
  }
  ScalarField err = sp::inverse(sp::derivative(sp::forward(f), 1, 1)) - expected;
  c.measured.push_back({"max_error", err.max_abs()});
  c.passed = err.max_abs() <= 1e-12;
  return c;
}

Check force_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "elastic_force_mean";
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SimState state = band_limited_state(grid, config.params, 500 + s);
    const VelocityField f = coupling::elastic_force(state.Q, config.params);
    worst = std::max({worst, std::abs(f.u1.integral()), std::abs(f.u2.integral())});
  }
  c.measured.push_back({"max_abs_mean", worst});
  c.passed = worst <= 1e-12;
  return c;
}

Check stretching_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "stretching_structure";
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const SimState state = stepper::prepare(band_limited_state(grid, config.params, 900 + s));
    worst = std::max(worst, coupling::stretching_defect(coupling::velocity_gradient(state.u), state.Q,
                                                        config.params));
  }
  c.measured.push_back({"max_relative_defect", worst});
  c.passed = worst <= 1e-10;
  return c;
}

Check lower_bound_check(const RunConfig& config, const Grid& grid) {
  Check c;
  c.name = "energy_lower_bound";
  const double bound = energetics::energy_lower_bound(config.params);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SimState state = band_limited_state(grid, config.params, 300 + s);
    lowest = std::min(lowest, diagnostics::total_energy(state, config.params).total);
  }
  const SimState eq(0.0, VelocityField(grid), initial::uniform_equilibrium(grid, config.params, 0.0));
  lowest = std::min(lowest, diagnostics::total_energy(eq, config.params).total);
  c.measured.push_back({"lowest_energy", lowest});
  c.measured.push_back({"bound", bound});
  c.passed = lowest >= bound;
  return c;
}

}  // namespace

Report run_suite(const RunConfig& config) {
  const Grid grid(config.verify_grid_n);
  Report r;
  r.checks.push_back(derivative_check(grid));
  r.checks.push_back(projection_check(grid, config.initial.velocity_seed));
  r.checks.push_back(variational_check(config, grid));
  r.checks.push_back(lower_bound_check(config, grid));
  r.checks.push_back(stretching_check(config, grid));
  r.checks.push_back(force_check(config, grid));
  if (config.params.xi == 0.0) r.checks.push_back(xi0_check(config, grid));
  r.checks.push_back(identity_check(config, grid));
  r.checks.push_back(energy_law_check(config, grid));
  return r;
}

}  // namespace nematic::verify
