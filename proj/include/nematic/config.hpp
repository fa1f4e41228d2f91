#pragma once

// Run configuration: a flat `key = value` document, `#` starts a comment.
// Every key is optional; see README for the schema and defaults.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nematic/fields.hpp"
#include "nematic/stepper.hpp"

namespace nematic {

enum class VelocityInit { taylor_green, random_smooth, quiescent };
enum class QInit { random_q, constant_q, perturbed_equilibrium };

struct InitialCondition {
  VelocityInit velocity = VelocityInit::random_smooth;
  std::uint64_t velocity_seed = 1;
  double velocity_amplitude = 1.0;  // Taylor-Green factor, or target ||u||_L2 for random data
  double spectrum_decay = 1.0;      // |psi(k)| ~ |k|^-decay
  int velocity_band = 1;            // max(|k1|, |k2|) of random velocity modes

  QInit q = QInit::perturbed_equilibrium;
  std::uint64_t q_seed = 2;
  double q_amplitude = 0.1;  // max pointwise sqrt(tr Q^2) of the random part
  int q_band = 3;
  double q_p = 0.5;  // constant_q value
  double q_q = 0.5;
  double q_angle = 0.0;  // director angle of the perturbed equilibrium
};

struct RunConfig {
  Parameters params;
  int grid_n = 128;
  stepper::StepperConfig stepper;
  InitialCondition initial;
  std::string output_dir = "out";
  std::size_t snapshot_every = 0;  // steps; 0 writes only the final snapshot
  double relax_tol = 1e-10;
  std::size_t relax_max_steps = 100000;
  bool stop_at_equilibrium = true;
  double equilibrium_tol_u = 1e-8;
  double equilibrium_tol_H = 1e-8;
  std::string reference_qinf;    // snapshot path; enables Q_minus_Qinf_H2
  std::string initial_snapshot;  // snapshot path; overrides the initial condition
  int verify_grid_n = 64;
};

// Every problem found while parsing, in document order.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Throws ConfigError listing unknown keys, malformed values and violated invariants.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Velocity seed N, Q seed N + 1.
void apply_seed(RunConfig& config, std::uint64_t seed);

// Invariant violations of an assembled config (empty when valid).
std::vector<std::string> validate(const RunConfig& config);

}  // namespace nematic
