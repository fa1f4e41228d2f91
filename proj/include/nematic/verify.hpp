#pragma once

// Property suite behind the `verify` subcommand, plus the experiments it is
// built from (shared with the acceptance tests).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nematic/config.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/stepper.hpp"

namespace nematic::verify {

struct Check {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> measured;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  bool passed() const;
  std::string to_json() const;
};

// Band-limited random state: velocity from a stream function with modes
// max(|k1|,|k2|) <= u_band and ||u|| = 1; Q a perturbed uniform equilibrium with
// modes <= q_band and perturbation amplitude 0.3. Low bands keep every product in
// the dynamics alias-free on moderate grids.
SimState band_limited_state(const Grid& grid, const Parameters& params, std::uint64_t seed, int u_band = 2,
                            int q_band = 3);

struct EnergyLawPoint {
  double dt = 0.0;
  double max_relative = 0.0;
};

// Runs `window` time units at each dt, sampling every step, and reports the
// max relative centered-difference residual of the energy law.
std::vector<EnergyLawPoint> energy_law_sweep(const SimState& initial, const Parameters& params,
                                             const std::vector<double>& dts, double window,
                                             const stepper::StepOptions& options = {});

struct IdentityPoint {
  double dt_probe = 0.0;
  diagnostics::IdentityResidual residual;
};

std::vector<IdentityPoint> identity_sweep(const SimState& state, const Parameters& params,
                                          const std::vector<double>& dt_probes);

// Max over `pairs` random (Q, dQ) of |<-H, dQ> - dF/de| / (1 + |dF/de|), dF/de by
// central differences with step eps.
double variational_consistency(const Grid& grid, const Parameters& params, std::uint64_t seed, int pairs,
                               double eps);

// True when every successive ratio is at most `ratio`.
bool decays(const std::vector<double>& values, double ratio);

Report run_suite(const RunConfig& config);

}  // namespace nematic::verify
