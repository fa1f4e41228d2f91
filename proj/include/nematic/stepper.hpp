#pragma once

// Time integration of the coupled system
//
//   u_t = P(-u.grad u + lambda div(tau + sigma)) + nu Lap u
//   Q_t = -u.grad Q + S(grad u, Q) + Gamma F(Q) + Gamma L Lap Q
//
// The implicit part is the linear operator of the system at (u = 0, Q = mean of Q):
// the two diffusions plus, optionally, the stress/stretching coupling through
// L Lap Q. Everything else is explicit. The coupling has three derivatives on Q
// and one on u, so treated explicitly it is unstable at high wavenumbers once
// lambda |Q|^2 exceeds nu Gamma; with constant coefficients the implicit solve
// stays a 4x4 block per Fourier mode.
//
// Two IMEX schemes: first-order Euler, and the second-order L-stable ARS(2,2,2)
// scheme (default). The state is kept Leray-projected and dealiased after every step.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematic/fields.hpp"

namespace nematic {
struct DiagnosticsRow;
}

namespace nematic::stepper {

enum class Scheme { euler, ars222 };

// Parses "euler" / "ars222"; std::nullopt otherwise.
std::optional<Scheme> parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct StepperConfig {
  double dt = 1e-3;     // base step
  double cfl = 0.5;     // safety factor in (0, 1]
  bool adaptive = false;
  double t_end = 1.0;
  std::size_t sample_every = 1;  // observer cadence in steps
  Scheme scheme = Scheme::ars222;
  bool implicit_coupling = true;

  std::vector<std::string> validate() const;
};

struct StepOptions {
  Scheme scheme = Scheme::ars222;
  bool implicit_coupling = true;
};

// Non-finite values or max norms above kBlowUpThreshold. Carries the offending
// state and the name of the term that failed.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, std::string term, SimState state);
  const std::string& term() const noexcept { return term_; }
  const SimState& state() const noexcept { return state_; }

 private:
  std::string term_;
  SimState state_;
};

inline constexpr double kBlowUpThreshold = 1e6;

// Right-hand side split by physical term.
struct RhsTerms {
  VelocityField advection_u;       // P(u.grad u)
  VelocityField elastic_force;     // P(lambda div(tau + sigma))
  VelocityField viscous;           // nu Lap u
  QTensorField advection_q;        // u.grad Q
  QTensorField stretching;         // S(grad u, Q)
  QTensorField reaction;           // Gamma F(Q)
  QTensorField elastic_diffusion;  // Gamma L Lap Q

  explicit RhsTerms(Grid grid);
};

struct Rhs {
  VelocityField du;
  QTensorField dQ;
};

// Throws BlowUpError naming the first non-finite term.
RhsTerms rhs_terms(const SimState& state, const Parameters& params);
// Full time derivative (explicit plus diffusive parts).
Rhs rhs(const SimState& state, const Parameters& params);
// Explicit part only.
Rhs explicit_rhs(const SimState& state, const Parameters& params);

// Projects u, dealiases both fields.
SimState prepare(const SimState& state);

// One step of size dt > 0. Throws BlowUpError.
SimState step(const SimState& state, double dt, const Parameters& params,
              const StepOptions& options = {});

// cfl * min(dx / |u|_inf, dx / v_S, 1 / (Gamma (|a| + 3 c max tr Q^2))), capped by
// config.dt, with the stretching speed v_S = (|xi| + 2 |Q|_inf + 4 |xi| |Q|_inf^2) |u|_inf.
double cfl_dt(const SimState& state, const Parameters& params, const StepperConfig& config);

// Observer: called at step 0 and every sample_every steps; return true to stop.
using Observer = std::function<bool(const SimState&, const DiagnosticsRow&)>;
using Checkpoint = std::function<void(const SimState&)>;

struct RunResult {
  SimState state;
  std::size_t steps = 0;
  bool stopped_by_observer = false;
};

// Steps until t >= t_end or the observer stops the run. On blow-up the checkpoint
// (if any) receives the last finite state and the BlowUpError is rethrown.
// `reference` sets Q_inf for the Q_minus_Qinf_H2 column.
RunResult run(const SimState& initial, const Parameters& params, const StepperConfig& config,
              const Observer& observer, const Checkpoint& checkpoint = {},
              const QTensorField* reference = nullptr);

}  // namespace nematic::stepper
