#pragma once

// Measurements along a run: energies, the higher-order energy A, the energy-law
// and twelve-term identity residuals, decay detection, the Lyapunov functional Y
// and convergence-rate fits.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nematic/energetics.hpp"
#include "nematic/fields.hpp"

namespace nematic {

// One sampled record; CSV columns in declaration order.
struct DiagnosticsRow {
  double t = 0.0;
  double E_total = 0.0;
  double E_kinetic = 0.0;
  double E_elastic = 0.0;
  double E_bulk = 0.0;
  double grad_u_L2sq = 0.0;  // ||grad u||^2
  double H_L2sq = 0.0;       // ||H(Q)||^2
  double A = 0.0;            // grad_u_L2sq + lambda H_L2sq
  double B = 0.0;            // e + ln(e + A)
  double div_u_max = 0.0;    // max_k |k . u(k)|
  double Q_Linf = 0.0;       // max pointwise sqrt(tr Q^2)
  double u_H1 = 0.0;
  double Q_minus_Qinf_H2 = std::numeric_limits<double>::quiet_NaN();  // NaN without reference
  double energy_residual = std::numeric_limits<double>::quiet_NaN();  // NaN on the first row

  static constexpr std::size_t kColumns = 14;
  static const std::array<const char*, kColumns>& column_names();
  std::array<double, kColumns> values() const;
  static DiagnosticsRow from_values(const std::array<double, kColumns>& v);
};

}  // namespace nematic

namespace nematic::diagnostics {

energetics::EnergyBreakdown total_energy(const SimState& state, const Parameters& params);

double grad_u_l2sq(const VelocityField& u);
double h_l2sq(const QTensorField& Q, const Parameters& params);
double higher_energy_A(const SimState& state, const Parameters& params);
// nu ||grad u||^2 + lambda Gamma ||H||^2
double dissipation(const SimState& state, const Parameters& params);

// Sobolev norms with the spectral weights (1 + 4 pi^2 |k|^2)^s; Q norms carry the
// Frobenius factor 2.
double u_h1_norm(const VelocityField& u);
double q_h1_distance(const QTensorField& Q, const QTensorField& Qinf);
double q_h2_distance(const QTensorField& Q, const QTensorField& Qinf);

struct ResidualSeries {
  std::vector<double> residual;  // one per interior sample
  double max_relative = 0.0;     // max |r| / max dissipation over the same samples
};

// r_n = (E_{n+1} - E_{n-1}) / (2 dt_sample) + D_n for interior samples, D the
// dissipation. Throws std::invalid_argument for fewer than 3 samples or size mismatch.
ResidualSeries energy_law_residual(const std::vector<double>& energy,
                                   const std::vector<double>& dissipation, double dt_sample);

struct IdentityTerms {
  std::array<double, 12> J{};
  double viscous = 0.0;     // nu ||Lap u||^2
  double relaxation = 0.0;  // lambda Gamma ||grad H||^2
  double sum() const;
};

// Right-hand side of
//
//   1/2 d/dt A_L + nu ||Lap u||^2 + lambda Gamma ||grad H||^2 = sum J_i,
//   A_L = ||grad u||^2 + lambda / L ||H||^2,
//
// evaluated on the dealiased state with spectral derivatives and grid quadrature.
// For a general elastic constant the functional needs the weight lambda / L on
// ||H||^2 for the stress and transport terms to cancel, and the three terms
// through dF (J10, J11, J12) then carry lambda / L in place of lambda. At L = 1
// both A_L and the terms reduce to the unweighted form.
IdentityTerms identity_terms(const SimState& state, const Parameters& params);

// A_L = ||grad u||^2 + lambda / L ||H||^2.
double identity_functional(const SimState& state, const Parameters& params);

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / (1 + |rhs|)
};

// dA_L/dt from the symmetric explicit probes s +- dt_probe * rhs(s). Throws
// stepper::BlowUpError if a probe leaves the finite range.
IdentityResidual identity_residual(const SimState& state, const Parameters& params, double dt_probe);

// ||u||_{H^1} <= tol_u and ||H(Q)|| <= tol_H. Throws std::invalid_argument for
// non-positive tolerances.
bool omega_limit_check(const SimState& state, const Parameters& params, double tol_u, double tol_H);

// Operator norm bound of the Hessian of f_B over tr Q^2 in [0, max_tr_q2]:
// max(|a|, |a + c t|, |a + 3 c t|).
double bulk_hessian_bound(const Parameters& params, double max_tr_q2);
// mu = 2 + 2 lambda C2 with C2 = lambda * bulk_hessian_bound.
double lyapunov_mu(const Parameters& params, double max_tr_q2);

// Y = 1/2 ||u||^2 + lambda L/2 ||grad(Q - Qinf)||^2 + mu/2 ||Q - Qinf||^2
//     + lambda int f_B(Q) - f_B(Qinf) - f_B'(Qinf):(Q - Qinf).
// Throws std::invalid_argument if ||H(Qinf)|| > 1e-8.
double lyapunov_Y(const SimState& state, const QTensorField& Qinf, double mu, const Parameters& params);

struct RateFit {
  bool refused = false;
  std::string reason;
  double poly_slope = 0.0;    // d log(norm) / d log(1 + t)
  double theta_hat = 0.0;     // from slope = -theta / (1 - 2 theta)
  bool theta_in_theory = false;  // theta_hat in (0, 1/2)
  double exp_rate = 0.0;      // -d log(norm) / dt
  double poly_residual = 0.0;  // RMS misfit in log(norm)
  double exp_residual = 0.0;
  std::string preference;     // "polynomial" or "exponential"
};

inline constexpr std::size_t kMinFitSamples = 20;

// Fits log(y) against log(1 + t) and t. `power` says y ~ norm^power (2 for A),
// and slopes are divided by it so both rates refer to the norm itself. Refuses
// with fewer than kMinFitSamples samples, non-positive values, or a non-decaying series.
RateFit fit_convergence_rate(const std::vector<double>& t, const std::vector<double>& y, int power = 1);

// Incremental row builder for runs. energy_residual is the trapezoidal residual
// (E_n - E_{n-1}) / (t_n - t_{n-1}) + (D_n + D_{n-1}) / 2.
class Sampler {
 public:
  explicit Sampler(const Parameters& params, const QTensorField* reference = nullptr);
  DiagnosticsRow sample(const SimState& state);

 private:
  Parameters params_;
  std::optional<QTensorField> reference_;
  bool has_previous_ = false;
  double t_prev_ = 0.0;
  double e_prev_ = 0.0;
  double d_prev_ = 0.0;
};

}  // namespace nematic::diagnostics
