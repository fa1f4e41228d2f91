#pragma once

// Landau-de Gennes free energy in 2D and its variational derivatives.
//
//   F(Q) = int L/2 |grad Q|^2 + f_B(Q) dx,  f_B = a/2 tr(Q^2) + c/4 tr(Q^2)^2
//   H(Q) = -dF/dQ = L Lap Q - a Q - c tr(Q^2) Q
//
// Gradient energies are summed by Parseval; bulk energies by the rectangle rule.

#include <cstddef>
#include <vector>

#include "nematic/fields.hpp"

namespace nematic::energetics {

struct EnergyBreakdown {
  double kinetic = 0.0;  // 1/2 ||u||^2
  double elastic = 0.0;  // lambda L/2 ||grad Q||^2
  double bulk = 0.0;     // lambda int f_B
  double total = 0.0;    // kinetic + elastic + bulk
};

// f_B pointwise: a (p^2+q^2) + c (p^2+q^2)^2.
ScalarField bulk_density(const QTensorField& Q, const Parameters& params);

double elastic_energy(const QTensorField& Q, const Parameters& params);  // int L/2 |grad Q|^2
double bulk_energy(const QTensorField& Q, const Parameters& params);     // int f_B
double free_energy(const QTensorField& Q, const Parameters& params);

EnergyBreakdown energy_breakdown(const SimState& state, const Parameters& params);

// H(Q) with the bulk product dealiased by the 2/3 rule.
QTensorField molecular_field(const QTensorField& Q, const Parameters& params);

// F(Q) = -a Q - c tr(Q^2) Q, the non-differential part of H (pointwise).
QTensorField bulk_field(const QTensorField& Q, const Parameters& params);

// dF(Q)[X] = -a X - c (tr(Q^2) X + 2 tr(QX) Q) (pointwise).
QTensorField linearized_F(const QTensorField& Q, const QTensorField& X, const Parameters& params);

// ||X||_{L^2} with the Frobenius pointwise norm.
double l2_norm(const QTensorField& X);

// Constant M of the lower bound f_B >= -(M+1)^2 / c. For b = 0 the required
// inequality M/2 tr + c/8 tr^2 <= (M + a/2) tr + c/4 tr^2 holds iff M >= -a.
double lower_bound_constant(const Parameters& params);
// -lambda (M+1)^2 / c |T^2|: every state's total energy is at least this.
double energy_lower_bound(const Parameters& params);

struct RelaxResult {
  QTensorField Q;
  double residual = 0.0;  // ||H(Q)||_{L^2} at return
  std::size_t steps = 0;
  bool converged = false;
  bool energy_monotone = true;
  std::vector<double> energies;  // free energy before each step and at return
};

// Gradient flow Q_t = Gamma H(Q) with implicit L Lap Q and explicit bulk terms,
// step 0.5 / (Gamma (|a| + 3 c max tr Q^2)) capped at 1 / Gamma, until
// ||H|| <= tol or max_steps. Throws std::invalid_argument if tol <= 0.
RelaxResult relax_to_equilibrium(const QTensorField& Q0, const Parameters& params, double tol,
                                 std::size_t max_steps);

}  // namespace nematic::energetics
