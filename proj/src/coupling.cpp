#include "nematic/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "nematic/energetics.hpp"
#include "nematic/kernels.hpp"

namespace nematic::coupling {

namespace sp = nematic::spectral;

namespace {

struct Resolved {
  ScalarField f;
  ScalarField d1;
  ScalarField d2;
};

// Dealiased values and first derivatives of a scalar field.
Resolved resolve(const ScalarField& f) {
  const sp::SpectralField s = sp::dealias(sp::forward(f));
  return {sp::inverse(s), sp::inverse(sp::derivative(s, 1, 1)), sp::inverse(sp::derivative(s, 2, 1))};
}

ScalarField project(const ScalarField& f) { return sp::dealiased(f); }

kernels::TensorOut outputs(Tensor2Field& t) {
  return {t(0, 0).span(), t(0, 1).span(), t(1, 0).span(), t(1, 1).span()};
}

double stretching_into(const VelocityGradient& g, const ScalarField& p, const ScalarField& q,
                       const Parameters& params, ScalarField& sp_out, ScalarField& sq_out) {
  const kernels::GradU gu{g.gradu(0, 0).span(), g.gradu(0, 1).span(), g.gradu(1, 0).span(),
                          g.gradu(1, 1).span()};
  const double defect = kernels::stretching(gu, p.span(), q.span(), params.xi, sp_out.span(), sq_out.span());
  double gmax = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gmax = std::max(gmax, g.gradu(i, j).max_abs());
  const double qmax = QTensorField(p, q).max_norm();
  const double scale = std::max(1.0, gmax * std::max(1.0, qmax * qmax));
  return defect / scale;
}

void split_gradient(VelocityGradient& g) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ScalarField sym = g.gradu(i, j) + g.gradu(j, i);
      sym *= 0.5;
      ScalarField skew = g.gradu(i, j) - g.gradu(j, i);
      skew *= 0.5;
      g.D(i, j) = std::move(sym);
      g.Omega(i, j) = std::move(skew);
    }
  }
}

void gradient_from(const sp::SpectralField (&s)[2], VelocityGradient& g) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g.gradu(i, j) = sp::inverse(sp::derivative(s[i], j + 1, 1));
  split_gradient(g);
}

void check_defect(double defect) {
  if (defect > 1e-8) {
    throw ConsistencyError("stretching matrix not symmetric traceless (defect " +
                           std::to_string(defect) + ")");
  }
}

// tau + sigma from dealiased inputs, not projected.
Tensor2Field total_stress(const ScalarField& p, const ScalarField& q, const ScalarField& hp,
                          const ScalarField& hq, const kernels::GradQ& dq, const Parameters& params) {
  Tensor2Field tau(p.grid());
  Tensor2Field sigma(p.grid());
  const double sign = params.corrupt_tau_sign ? -1.0 : 1.0;
  kernels::stress_tau(p.span(), q.span(), hp.span(), hq.span(), dq, params.xi, params.L, sign, outputs(tau));
  kernels::stress_sigma(p.span(), q.span(), hp.span(), hq.span(), outputs(sigma));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tau(i, j) += sigma(i, j);
  return tau;
}

}  // namespace

VelocityGradient velocity_gradient(const VelocityField& u) {
  VelocityGradient g(u.grid());
  const sp::SpectralField s[2] = {sp::dealias(sp::forward(u.u1)), sp::dealias(sp::forward(u.u2))};
  gradient_from(s, g);
  return g;
}

double stretching_defect(const VelocityGradient& g, const QTensorField& Q, const Parameters& params) {
  const ScalarField p = project(Q.p);
  const ScalarField q = project(Q.q);
  ScalarField op(Q.grid()), oq(Q.grid());
  return stretching_into(g, p, q, params, op, oq);
}

QTensorField stretching(const VelocityGradient& g, const QTensorField& Q, const Parameters& params) {
  require_same_grid(g.gradu.grid(), Q.grid(), "stretching");
  const ScalarField p = project(Q.p);
  const ScalarField q = project(Q.q);
  QTensorField S(Q.grid());
  check_defect(stretching_into(g, p, q, params, S.p, S.q));
  return QTensorField(project(S.p), project(S.q));
}

Tensor2Field stress_tau(const QTensorField& Q, const QTensorField& H, const Parameters& params) {
  require_same_grid(Q.grid(), H.grid(), "stress_tau");
  const Resolved p = resolve(Q.p);
  const Resolved q = resolve(Q.q);
  const ScalarField hp = project(H.p);
  const ScalarField hq = project(H.q);
  Tensor2Field tau(Q.grid());
  const kernels::GradQ dq{p.d1.span(), p.d2.span(), q.d1.span(), q.d2.span()};
  const double sign = params.corrupt_tau_sign ? -1.0 : 1.0;
  kernels::stress_tau(p.f.span(), q.f.span(), hp.span(), hq.span(), dq, params.xi, params.L, sign,
                      outputs(tau));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tau(i, j) = project(tau(i, j));
  return tau;
}

Tensor2Field stress_sigma(const QTensorField& Q, const QTensorField& H) {
  require_same_grid(Q.grid(), H.grid(), "stress_sigma");
  const ScalarField p = project(Q.p);
  const ScalarField q = project(Q.q);
  const ScalarField hp = project(H.p);
  const ScalarField hq = project(H.q);
  Tensor2Field sigma(Q.grid());
  kernels::stress_sigma(p.span(), q.span(), hp.span(), hq.span(), outputs(sigma));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sigma(i, j) = project(sigma(i, j));
  return sigma;
}

VelocityField tensor_divergence(const Tensor2Field& T) {
  VelocityField out(T.grid());
  ScalarField* comps[2] = {&out.u1, &out.u2};
  for (int i = 0; i < 2; ++i) {
    sp::SpectralField acc = sp::derivative(sp::forward(T(i, 0)), 1, 1);
    acc += sp::derivative(sp::forward(T(i, 1)), 2, 1);
    sp::dealias_inplace(acc);
    *comps[i] = sp::inverse(acc);
  }
  return out;
}

VelocityField elastic_force(const QTensorField& Q, const Parameters& params) {
  const QTensorField H = energetics::molecular_field(Q, params);
  const Resolved p = resolve(Q.p);
  const Resolved q = resolve(Q.q);
  const kernels::GradQ dq{p.d1.span(), p.d2.span(), q.d1.span(), q.d2.span()};
  // The divergence dealiases, so the stress itself needs no projection.
  VelocityField f = tensor_divergence(total_stress(p.f, q.f, project(H.p), project(H.q), dq, params));
  f *= params.lambda;
  return f;
}

QTensorField advect_q(const VelocityField& u, const QTensorField& Q) {
  require_same_grid(u.grid(), Q.grid(), "advect_q");
  const ScalarField u1 = project(u.u1);
  const ScalarField u2 = project(u.u2);
  const Resolved p = resolve(Q.p);
  const Resolved q = resolve(Q.q);
  QTensorField out(Q.grid());
  kernels::advect(u1.span(), u2.span(), p.d1.span(), p.d2.span(), out.p.span());
  kernels::advect(u1.span(), u2.span(), q.d1.span(), q.d2.span(), out.q.span());
  return QTensorField(project(out.p), project(out.q));
}

VelocityField advect_u(const VelocityField& u) {
  const Resolved a = resolve(u.u1);
  const Resolved b = resolve(u.u2);
  VelocityField out(u.grid());
  kernels::advect(a.f.span(), b.f.span(), a.d1.span(), a.d2.span(), out.u1.span());
  kernels::advect(a.f.span(), b.f.span(), b.d1.span(), b.d2.span(), out.u2.span());
  return VelocityField(project(out.u1), project(out.u2));
}

ResolvedState::ResolvedState(Grid grid)
    : u1_hat(grid), u2_hat(grid), p_hat(grid), q_hat(grid), u(grid), g(grid), Q(grid), dQ1(grid), dQ2(grid),
      F(grid), H(grid) {}

ResolvedState resolve_state(const SimState& state, const Parameters& params) {
  ResolvedState r(state.grid());
  r.u1_hat = sp::dealias(sp::forward(state.u.u1));
  r.u2_hat = sp::dealias(sp::forward(state.u.u2));
  r.p_hat = sp::dealias(sp::forward(state.Q.p));
  r.q_hat = sp::dealias(sp::forward(state.Q.q));
  r.u = VelocityField(sp::inverse(r.u1_hat), sp::inverse(r.u2_hat));
  const sp::SpectralField us[2] = {r.u1_hat, r.u2_hat};
  gradient_from(us, r.g);
  r.Q = QTensorField(sp::inverse(r.p_hat), sp::inverse(r.q_hat));
  r.dQ1 = QTensorField(sp::inverse(sp::derivative(r.p_hat, 1, 1)), sp::inverse(sp::derivative(r.q_hat, 1, 1)));
  r.dQ2 = QTensorField(sp::inverse(sp::derivative(r.p_hat, 2, 1)), sp::inverse(sp::derivative(r.q_hat, 2, 1)));
  const QTensorField bulk = energetics::bulk_field(r.Q, params);
  auto molecular = [&](const sp::SpectralField& f, const ScalarField& b, ScalarField& h_out, ScalarField& f_out) {
    sp::SpectralField bh = sp::dealias(sp::forward(b));
    f_out = sp::inverse(bh);
    sp::SpectralField h = sp::laplacian(f);
    h *= params.L;
    h += bh;
    h_out = sp::inverse(h);
  };
  molecular(r.p_hat, bulk.p, r.H.p, r.F.p);
  molecular(r.q_hat, bulk.q, r.H.q, r.F.q);
  return r;
}

QTensorField stretching(const ResolvedState& r, const Parameters& params) {
  QTensorField S(r.Q.grid());
  check_defect(stretching_into(r.g, r.Q.p, r.Q.q, params, S.p, S.q));
  return QTensorField(project(S.p), project(S.q));
}

VelocityField elastic_force(const ResolvedState& r, const Parameters& params) {
  const kernels::GradQ dq{r.dQ1.p.span(), r.dQ2.p.span(), r.dQ1.q.span(), r.dQ2.q.span()};
  VelocityField f = tensor_divergence(total_stress(r.Q.p, r.Q.q, r.H.p, r.H.q, dq, params));
  f *= params.lambda;
  return f;
}

QTensorField advect_q(const ResolvedState& r) {
  QTensorField out(r.Q.grid());
  kernels::advect(r.u.u1.span(), r.u.u2.span(), r.dQ1.p.span(), r.dQ2.p.span(), out.p.span());
  kernels::advect(r.u.u1.span(), r.u.u2.span(), r.dQ1.q.span(), r.dQ2.q.span(), out.q.span());
  return QTensorField(project(out.p), project(out.q));
}

VelocityField advect_u(const ResolvedState& r) {
  const Tensor2Field& G = r.g.gradu;
  VelocityField out(r.u.grid());
  kernels::advect(r.u.u1.span(), r.u.u2.span(), G(0, 0).span(), G(0, 1).span(), out.u1.span());
  kernels::advect(r.u.u1.span(), r.u.u2.span(), G(1, 0).span(), G(1, 1).span(), out.u2.span());
  return VelocityField(project(out.u1), project(out.u2));
}

ScalarField reconstruct_pressure(const SimState& state, const Parameters& params) {
  VelocityField g = advect_u(state.u);
  g -= elastic_force(state.Q, params);
  return sp::pressure_from_divergence(g);
}

}  // namespace nematic::coupling
