#pragma once

// Fluid / order-parameter interaction terms. Every nonlinear product is formed in
// physical space from dealiased inputs and dealiased again afterwards.
//
// Index convention: gradu(i, j) = d_j u_i, so tr(Q gradu) = sum_ij Q_ij d_j u_i.

#include <stdexcept>
#include <string>

#include "nematic/fields.hpp"
#include "nematic/spectral.hpp"

namespace nematic::coupling {

// Raised when a structural identity fails beyond round-off, which means a formula bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct VelocityGradient {
  Tensor2Field gradu;  // d_j u_i
  Tensor2Field D;      // (gradu + gradu^T) / 2
  Tensor2Field Omega;  // (gradu - gradu^T) / 2

  explicit VelocityGradient(Grid grid) : gradu(grid), D(grid), Omega(grid) {}
};

// Gradient of the dealiased velocity.
VelocityGradient velocity_gradient(const VelocityField& u);

// S = (xi D + Omega)(Q + I/2) + (Q + I/2)(xi D - Omega) - 2 xi (Q + I/2) tr(Q gradu),
// evaluated as a full matrix and reduced to (p, q). Throws ConsistencyError if the
// matrix misses symmetry or zero trace by more than 1e-8 relative to its scale
// (the trace equals xi div u, so u must be divergence-free).
QTensorField stretching(const VelocityGradient& g, const QTensorField& Q, const Parameters& params);

// Largest symmetry / trace defect of the unreduced stretching matrix, relative
// to max(1, max|gradu| max(1, tr Q^2)).
double stretching_defect(const VelocityGradient& g, const QTensorField& Q, const Parameters& params);

// tau = -xi (Q+I/2) H - xi H (Q+I/2) + 2 xi (Q+I/2) tr(QH) - L gradQ (.) gradQ.
Tensor2Field stress_tau(const QTensorField& Q, const QTensorField& H, const Parameters& params);

// sigma = QH - HQ; in components sigma12 = -sigma21 = 2 (p H_q - q H_p), diagonal zero.
Tensor2Field stress_sigma(const QTensorField& Q, const QTensorField& H);

// f_i = lambda d_j (tau_ij + sigma_ij) with H = molecular_field(Q). Not projected.
VelocityField elastic_force(const QTensorField& Q, const Parameters& params);

// Spectral divergence (d_j T_ij) of a tensor field, dealiased.
VelocityField tensor_divergence(const Tensor2Field& T);

// u . grad Q on (p, q), dealiased.
QTensorField advect_q(const VelocityField& u, const QTensorField& Q);

// u . grad u, dealiased (not projected).
VelocityField advect_u(const VelocityField& u);

// Dealiased state with its first derivatives and molecular field, shared by all
// terms of one right-hand-side evaluation so that each field is transformed once.
struct ResolvedState {
  spectral::SpectralField u1_hat, u2_hat, p_hat, q_hat;  // dealiased spectra
  VelocityField u;
  VelocityGradient g;
  QTensorField Q;
  QTensorField dQ1;  // d_1 Q
  QTensorField dQ2;  // d_2 Q
  QTensorField F;    // dealiased bulk field of Q
  QTensorField H;    // molecular field of Q

  explicit ResolvedState(Grid grid);
};

ResolvedState resolve_state(const SimState& state, const Parameters& params);

// The terms above evaluated on a resolved state. Each agrees with its two-argument
// counterpart applied to the dealiased state.
QTensorField stretching(const ResolvedState& r, const Parameters& params);
VelocityField elastic_force(const ResolvedState& r, const Parameters& params);
QTensorField advect_q(const ResolvedState& r);
VelocityField advect_u(const ResolvedState& r);

// Zero-mean P with -Lap P = div(u . grad u - lambda div(tau + sigma)).
ScalarField reconstruct_pressure(const SimState& state, const Parameters& params);

}  // namespace nematic::coupling
