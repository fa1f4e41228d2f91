#include "nematic/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nematic/kernels.hpp"
#include "nematic/spectral.hpp"

namespace nematic::energetics {

namespace sp = nematic::spectral;

ScalarField bulk_density(const QTensorField& Q, const Parameters& params) {
  ScalarField out(Q.grid());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double r = Q.p[k] * Q.p[k] + Q.q[k] * Q.q[k];
    out[k] = params.a * r + params.c * r * r;
  }
  return out;
}

double elastic_energy(const QTensorField& Q, const Parameters& params) {
  // |grad Q|^2 = 2 (|grad p|^2 + |grad q|^2)
  const double g = sp::gradient_l2_squared(sp::forward(Q.p)) + sp::gradient_l2_squared(sp::forward(Q.q));
  return params.L * g;
}

double bulk_energy(const QTensorField& Q, const Parameters& params) {
  return bulk_density(Q, params).integral();
}

double free_energy(const QTensorField& Q, const Parameters& params) {
  return elastic_energy(Q, params) + bulk_energy(Q, params);
}

EnergyBreakdown energy_breakdown(const SimState& state, const Parameters& params) {
  EnergyBreakdown e;
  e.kinetic = 0.5 * inner(state.u, state.u);
  e.elastic = params.lambda * elastic_energy(state.Q, params);
  e.bulk = params.lambda * bulk_energy(state.Q, params);
  e.total = e.kinetic + e.elastic + e.bulk;
  return e;
}

QTensorField bulk_field(const QTensorField& Q, const Parameters& params) {
  QTensorField out(Q.grid());
  kernels::bulk_field(Q.p.span(), Q.q.span(), params.a, params.c, out.p.span(), out.q.span());
  return out;
}

QTensorField molecular_field(const QTensorField& Q, const Parameters& params) {
  const QTensorField bulk = bulk_field(Q, params);
  auto component = [&](const ScalarField& f, const ScalarField& b) {
    sp::SpectralField h = sp::laplacian(sp::forward(f));
    h *= params.L;
    h += sp::forward(b);
    sp::dealias_inplace(h);
    return sp::inverse(h);
  };
  return QTensorField(component(Q.p, bulk.p), component(Q.q, bulk.q));
}

QTensorField linearized_F(const QTensorField& Q, const QTensorField& X, const Parameters& params) {
  require_same_grid(Q.grid(), X.grid(), "linearized_F");
  QTensorField out(Q.grid());
  kernels::linearized_bulk(Q.p.span(), Q.q.span(), X.p.span(), X.q.span(), params.a, params.c,
                           out.p.span(), out.q.span());
  return out;
}

double l2_norm(const QTensorField& X) { return std::sqrt(inner(X, X)); }

double lower_bound_constant(const Parameters& params) { return std::max(-params.a, 0.0); }

double energy_lower_bound(const Parameters& params) {
  const double m = lower_bound_constant(params);
  return -params.lambda * (m + 1.0) * (m + 1.0) / params.c;
}

RelaxResult relax_to_equilibrium(const QTensorField& Q0, const Parameters& params, double tol,
                                 std::size_t max_steps) {
  if (!(tol > 0.0)) throw std::invalid_argument("relax_to_equilibrium requires tol > 0");
  RelaxResult result{Q0, 0.0, 0, false, true, {}};
  // Work on the resolved (dealiased) representation throughout.
  sp::SpectralField p = sp::dealias(sp::forward(Q0.p));
  sp::SpectralField q = sp::dealias(sp::forward(Q0.q));
  result.Q = QTensorField(sp::inverse(p), sp::inverse(q));

  double energy = free_energy(result.Q, params);
  result.energies.push_back(energy);
  for (;;) {
    result.residual = l2_norm(molecular_field(result.Q, params));
    if (result.residual <= tol) {
      result.converged = true;
      break;
    }
    if (result.steps >= max_steps) break;

    const double tr_max = 2.0 * std::pow(result.Q.max_norm() / std::sqrt(2.0), 2);
    const double lip = params.gamma * (std::abs(params.a) + 3.0 * params.c * tr_max);
    const double dtau = std::min(0.5 / std::max(lip, 1e-300), 1.0 / params.gamma);

    const QTensorField bulk = bulk_field(result.Q, params);
    sp::SpectralField bp = sp::forward(bulk.p);
    sp::SpectralField bq = sp::forward(bulk.q);
    sp::dealias_inplace(bp);
    sp::dealias_inplace(bq);
    p.add_scaled(dtau * params.gamma, bp);
    q.add_scaled(dtau * params.gamma, bq);
    p = sp::invert_helmholtz(p, params.gamma * params.L * dtau);
    q = sp::invert_helmholtz(q, params.gamma * params.L * dtau);
    result.Q = QTensorField(sp::inverse(p), sp::inverse(q));
    ++result.steps;

    const double next = free_energy(result.Q, params);
    if (next > energy + 1e-10 * (1.0 + std::abs(energy))) result.energy_monotone = false;
    energy = next;
    result.energies.push_back(energy);
  }
  return result;
}

}  // namespace nematic::energetics
