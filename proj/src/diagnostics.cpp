#include "nematic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nematic/kernels.hpp"
#include "nematic/spectral.hpp"
#include "nematic/stepper.hpp"

namespace nematic {

const std::array<const char*, DiagnosticsRow::kColumns>& DiagnosticsRow::column_names() {
  static const std::array<const char*, kColumns> names = {
      "t",      "E_total",  "E_kinetic", "E_elastic", "E_bulk", "grad_u_L2sq",     "H_L2sq",
      "A",      "B",        "div_u_max", "Q_Linf",    "u_H1",   "Q_minus_Qinf_H2", "energy_residual"};
  return names;
}

std::array<double, DiagnosticsRow::kColumns> DiagnosticsRow::values() const {
  return {t, E_total, E_kinetic, E_elastic, E_bulk, grad_u_L2sq, H_L2sq,
          A, B,       div_u_max, Q_Linf,    u_H1,   Q_minus_Qinf_H2, energy_residual};
}

DiagnosticsRow DiagnosticsRow::from_values(const std::array<double, kColumns>& v) {
  DiagnosticsRow r;
  r.t = v[0];
  r.E_total = v[1];
  r.E_kinetic = v[2];
  r.E_elastic = v[3];
  r.E_bulk = v[4];
  r.grad_u_L2sq = v[5];
  r.H_L2sq = v[6];
  r.A = v[7];
  r.B = v[8];
  r.div_u_max = v[9];
  r.Q_Linf = v[10];
  r.u_H1 = v[11];
  r.Q_minus_Qinf_H2 = v[12];
  r.energy_residual = v[13];
  return r;
}

}  // namespace nematic

namespace nematic::diagnostics {

namespace sp = nematic::spectral;

energetics::EnergyBreakdown total_energy(const SimState& state, const Parameters& params) {
  return energetics::energy_breakdown(state, params);
}

double grad_u_l2sq(const VelocityField& u) {
  return sp::gradient_l2_squared(sp::forward(u.u1)) + sp::gradient_l2_squared(sp::forward(u.u2));
}

double h_l2sq(const QTensorField& Q, const Parameters& params) {
  const QTensorField H = energetics::molecular_field(Q, params);
  return inner(H, H);
}

double higher_energy_A(const SimState& state, const Parameters& params) {
  return grad_u_l2sq(state.u) + params.lambda * h_l2sq(state.Q, params);
}

double dissipation(const SimState& state, const Parameters& params) {
  return params.nu * grad_u_l2sq(state.u) + params.lambda * params.gamma * h_l2sq(state.Q, params);
}

double u_h1_norm(const VelocityField& u) {
  return std::sqrt(sp::sobolev_squared(sp::forward(u.u1), 1) + sp::sobolev_squared(sp::forward(u.u2), 1));
}

namespace {

double q_distance(const QTensorField& Q, const QTensorField& Qinf, int s) {
  require_same_grid(Q.grid(), Qinf.grid(), "Q distance");
  sp::SpectralField dp = sp::forward(Q.p);
  dp -= sp::forward(Qinf.p);
  sp::SpectralField dq = sp::forward(Q.q);
  dq -= sp::forward(Qinf.q);
  return std::sqrt(2.0 * (sp::sobolev_squared(dp, s) + sp::sobolev_squared(dq, s)));
}

}  // namespace

double q_h1_distance(const QTensorField& Q, const QTensorField& Qinf) { return q_distance(Q, Qinf, 1); }
double q_h2_distance(const QTensorField& Q, const QTensorField& Qinf) { return q_distance(Q, Qinf, 2); }

ResidualSeries energy_law_residual(const std::vector<double>& energy,
                                   const std::vector<double>& dissipation, double dt_sample) {
  if (energy.size() < 3) throw std::invalid_argument("energy_law_residual needs at least 3 samples");
  if (energy.size() != dissipation.size()) {
    throw std::invalid_argument("energy and dissipation series differ in length");
  }
  if (!(dt_sample > 0.0)) throw std::invalid_argument("sample interval must be positive");
  ResidualSeries out;
  double rmax = 0.0;
  double dmax = 0.0;
  for (std::size_t n = 1; n + 1 < energy.size(); ++n) {
    const double r = (energy[n + 1] - energy[n - 1]) / (2.0 * dt_sample) + dissipation[n];
    out.residual.push_back(r);
    rmax = std::max(rmax, std::abs(r));
    dmax = std::max(dmax, std::abs(dissipation[n]));
  }
  out.max_relative = dmax > 0.0 ? rmax / dmax : rmax;
  return out;
}

// ---------------------------------------------------------------------------
// Twelve-term identity

double IdentityTerms::sum() const {
  double s = 0.0;
  for (double j : J) s += j;
  return s;
}

namespace {

using Mat = std::array<std::array<ScalarField, 2>, 2>;

ScalarField d(const ScalarField& f, int axis) {
  return sp::inverse(sp::derivative(sp::forward(f), axis + 1, 1));
}

ScalarField lap(const ScalarField& f) { return sp::inverse(sp::laplacian(sp::forward(f))); }

ScalarField mul(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

Mat matrix(const QTensorField& X) {
  ScalarField minus = X.p;
  minus *= -1.0;
  return Mat{{{X.p, X.q}, {X.q, minus}}};
}

template <class F>
Mat build(const Grid& grid, F&& f) {
  Mat m{{{ScalarField(grid), ScalarField(grid)}, {ScalarField(grid), ScalarField(grid)}}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = f(i, j);
  return m;
}

// int sum_ij A_ij B_ij
double frob_integral(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += integral_of_product(a[i][j], b[i][j]);
  return s;
}

}  // namespace

IdentityTerms identity_terms(const SimState& raw, const Parameters& params) {
  const SimState state = stepper::prepare(raw);
  const Grid& grid = state.grid();
  const double lam = params.lambda;
  const double xi = params.xi;

  const QTensorField& Qf = state.Q;
  const QTensorField Hf = energetics::molecular_field(Qf, params);
  const QTensorField bulk = energetics::bulk_field(Qf, params);
  const QTensorField Ff(sp::dealiased(bulk.p), sp::dealiased(bulk.q));

  const ScalarField* u[2] = {&state.u.u1, &state.u.u2};
  const Mat Q = matrix(Qf);
  const Mat H = matrix(Hf);
  const Mat F = matrix(Ff);
  // G(i, j) = d_j u_i
  const Mat G = build(grid, [&](int i, int j) { return d(*u[i], j); });
  const Mat D = build(grid, [&](int i, int j) { return 0.5 * (G[i][j] + G[j][i]); });
  const Mat lapQ = build(grid, [&](int i, int j) { return lap(Q[i][j]); });

  // dQ[l](i, j) = d_l Q_ij, dH likewise.
  std::array<Mat, 2> dQ = {build(grid, [&](int i, int j) { return d(Q[i][j], 0); }),
                           build(grid, [&](int i, int j) { return d(Q[i][j], 1); })};
  std::array<Mat, 2> dH = {build(grid, [&](int i, int j) { return d(H[i][j], 0); }),
                           build(grid, [&](int i, int j) { return d(H[i][j], 1); })};

  IdentityTerms out;
  auto& J = out.J;

  // J1 = int u_j d_j u_i Lap u_i
  for (int i = 0; i < 2; ++i) {
    ScalarField adv = mul(*u[0], G[i][0]);
    adv += mul(*u[1], G[i][1]);
    J[0] += integral_of_product(adv, lap(*u[i]));
  }

  // J2 = -2 lambda int d_l u_k d_l d_k Q_ij H_ij
  for (int l = 0; l < 2; ++l) {
    for (int k = 0; k < 2; ++k) {
      const Mat ddQ = build(grid, [&](int i, int j) { return d(dQ[k][i][j], l); });
      J[1] += -2.0 * lam * integral_of_product(G[k][l], [&] {
                ScalarField s(grid);
                for (int i = 0; i < 2; ++i)
                  for (int j = 0; j < 2; ++j) s += mul(ddQ[i][j], H[i][j]);
                return s;
              }());
    }
  }

  // J3 = lambda / L int u_k d_k F_ij H_ij
  for (int k = 0; k < 2; ++k) {
    const Mat dF = build(grid, [&](int i, int j) { return d(F[i][j], k); });
    J[2] += lam / params.L * integral_of_product(*u[k], [&] {
              ScalarField s(grid);
              for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s += mul(dF[i][j], H[i][j]);
              return s;
            }());
  }

  // J4 = -2 lambda int d_j u_i (d_l Q_kj d_l H_ik - d_l Q_ik d_l H_kj)
  // J5 = -lambda int d_j u_i (Lap Q_kj H_ik - Lap Q_ik H_kj)
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      ScalarField s4(grid), s5(grid);
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          s4 += mul(dQ[l][k][j], dH[l][i][k]);
          s4 -= mul(dQ[l][i][k], dH[l][k][j]);
        }
        s5 += mul(lapQ[k][j], H[i][k]);
        s5 -= mul(lapQ[i][k], H[k][j]);
      }
      J[3] += -2.0 * lam * integral_of_product(G[i][j], s4);
      J[4] += -lam * integral_of_product(G[i][j], s5);
    }
  }

  // J6 = lambda xi int (D Lap Q + Lap Q D) : H
  {
    const Mat sym = build(grid, [&](int i, int j) {
      ScalarField s(grid);
      for (int k = 0; k < 2; ++k) {
        s += mul(D[i][k], lapQ[k][j]);
        s += mul(lapQ[i][k], D[k][j]);
      }
      return s;
    });
    J[5] = lam * xi * frob_integral(sym, H);
  }

  // J7 = 4 lambda xi int d_l D_ik d_l Q_kj H_ij
  for (int l = 0; l < 2; ++l) {
    const Mat dD = build(grid, [&](int i, int j) { return d(D[i][j], l); });
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        ScalarField s(grid);
        for (int k = 0; k < 2; ++k) s += mul(dD[i][k], dQ[l][k][j]);
        J[6] += 4.0 * lam * xi * integral_of_product(s, H[i][j]);
      }
    }
  }

  // J8 = -2 lambda xi int Lap(Q_kl Q_ji) d_j u_i H_kl
  // J9 = -4 lambda xi int d_m(Q_kl Q_ji) d_m d_j u_i H_kl
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
          const ScalarField qq = mul(Q[k][l], Q[j][i]);
          const ScalarField gh = mul(G[i][j], H[k][l]);
          J[7] += -2.0 * lam * xi * integral_of_product(lap(qq), gh);
          for (int m = 0; m < 2; ++m) {
            J[8] += -4.0 * lam * xi * integral_of_product(d(qq, m), mul(d(G[i][j], m), H[k][l]));
          }
        }
      }
    }
  }

  // J10 = -lambda / L int dF[u . grad Q] : H
  // J11 = lambda / L int dF[S] : H
  // J12 = lambda / L Gamma int dF[H] : H
  {
    QTensorField transport(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      transport.p[n] = (*u[0])[n] * dQ[0][0][0][n] + (*u[1])[n] * dQ[1][0][0][n];
      transport.q[n] = (*u[0])[n] * dQ[0][0][1][n] + (*u[1])[n] * dQ[1][0][1][n];
    }
    QTensorField S(grid);
    const kernels::GradU gu{G[0][0].span(), G[0][1].span(), G[1][0].span(), G[1][1].span()};
    kernels::stretching(gu, Qf.p.span(), Qf.q.span(), xi, S.p.span(), S.q.span());
    const double w = lam / params.L;
    J[9] = -w * inner(energetics::linearized_F(Qf, transport, params), Hf);
    J[10] = w * inner(energetics::linearized_F(Qf, S, params), Hf);
    J[11] = w * params.gamma * inner(energetics::linearized_F(Qf, Hf, params), Hf);
  }

  out.viscous = params.nu * (sp::laplacian_l2_squared(sp::forward(state.u.u1)) +
                             sp::laplacian_l2_squared(sp::forward(state.u.u2)));
  out.relaxation = lam * params.gamma * 2.0 *
                   (sp::gradient_l2_squared(sp::forward(Hf.p)) + sp::gradient_l2_squared(sp::forward(Hf.q)));
  return out;
}

double identity_functional(const SimState& state, const Parameters& params) {
  return grad_u_l2sq(state.u) + params.lambda / params.L * h_l2sq(state.Q, params);
}

IdentityResidual identity_residual(const SimState& raw, const Parameters& params, double dt_probe) {
  if (!(dt_probe > 0.0)) throw std::invalid_argument("dt_probe must be positive");
  const SimState state = stepper::prepare(raw);
  const stepper::Rhs r = stepper::rhs(state, params);
  auto probe = [&](double sign) {
    SimState s = state;
    VelocityField du = r.du;
    du *= sign * dt_probe;
    QTensorField dq = r.dQ;
    dq *= sign * dt_probe;
    s.u += du;
    s.Q += dq;
    s.t += sign * dt_probe;
    const bool ok = s.u.u1.all_finite() && s.u.u2.all_finite() && s.Q.p.all_finite() && s.Q.q.all_finite();
    if (!ok) throw stepper::BlowUpError("identity probe produced non-finite values", "probe", s);
    return identity_functional(s, params);
  };
  const double a_plus = probe(1.0);
  const double a_minus = probe(-1.0);
  const IdentityTerms terms = identity_terms(state, params);
  IdentityResidual out;
  out.lhs = 0.5 * (a_plus - a_minus) / (2.0 * dt_probe) + terms.viscous + terms.relaxation;
  out.rhs = terms.sum();
  out.residual = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.rhs));
  return out;
}

bool omega_limit_check(const SimState& state, const Parameters& params, double tol_u, double tol_H) {
  if (!(tol_u > 0.0) || !(tol_H > 0.0)) throw std::invalid_argument("tolerances must be positive");
  return u_h1_norm(state.u) <= tol_u && std::sqrt(h_l2sq(state.Q, params)) <= tol_H;
}

double bulk_hessian_bound(const Parameters& params, double max_tr_q2) {
  const double a = params.a;
  const double ct = params.c * max_tr_q2;
  return std::max({std::abs(a), std::abs(a + ct), std::abs(a + 3.0 * ct)});
}

double lyapunov_mu(const Parameters& params, double max_tr_q2) {
  const double c2 = params.lambda * bulk_hessian_bound(params, max_tr_q2);
  return 2.0 + 2.0 * params.lambda * c2;
}

double lyapunov_Y(const SimState& state, const QTensorField& Qinf, double mu, const Parameters& params) {
  const double h = std::sqrt(h_l2sq(Qinf, params));
  if (h > 1e-8) {
    throw std::invalid_argument("reference Q is not an equilibrium (||H|| = " + std::to_string(h) + ")");
  }
  QTensorField diff = state.Q;
  diff -= Qinf;
  const double grad_sq = 2.0 * (sp::gradient_l2_squared(sp::forward(diff.p)) +
                                sp::gradient_l2_squared(sp::forward(diff.q)));
  // f_B'(Qinf) = -F(Qinf)
  QTensorField slope = energetics::bulk_field(Qinf, params);
  slope *= -1.0;
  const double bulk = energetics::bulk_energy(state.Q, params) - energetics::bulk_energy(Qinf, params) -
                      inner(slope, diff);
  return 0.5 * inner(state.u, state.u) + 0.5 * params.lambda * params.L * grad_sq +
         0.5 * mu * inner(diff, diff) + params.lambda * bulk;
}

// ---------------------------------------------------------------------------
// Rate fitting

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

RateFit fit_convergence_rate(const std::vector<double>& t, const std::vector<double>& y, int power) {
  RateFit fit;
  if (t.size() != y.size()) throw std::invalid_argument("time and value series differ in length");
  if (power < 1) throw std::invalid_argument("power must be positive");
  if (t.size() < kMinFitSamples) {
    fit.refused = true;
    fit.reason = "insufficient samples (" + std::to_string(t.size()) + " < " +
                 std::to_string(kMinFitSamples) + ")";
    return fit;
  }
  std::vector<double> logt, lin, logy;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(y[i] > 0.0) || !std::isfinite(y[i]) || !(t[i] > -1.0)) {
      fit.refused = true;
      fit.reason = "series contains non-positive or non-finite values";
      return fit;
    }
    logt.push_back(std::log1p(t[i]));
    lin.push_back(t[i]);
    logy.push_back(std::log(y[i]) / power);
  }
  const LineFit poly = least_squares(logt, logy);
  const LineFit expo = least_squares(lin, logy);
  fit.poly_slope = poly.slope;
  fit.exp_rate = -expo.slope;
  fit.poly_residual = poly.rms;
  fit.exp_residual = expo.rms;
  if (!(poly.slope < 0.0) || !(expo.slope < 0.0)) {
    fit.refused = true;
    fit.reason = "series is not decaying";
    return fit;
  }
  const double s = poly.slope;
  fit.theta_hat = s / (2.0 * s - 1.0);
  fit.theta_in_theory = fit.theta_hat > 0.0 && fit.theta_hat < 0.5;
  fit.preference = poly.rms <= expo.rms ? "polynomial" : "exponential";
  return fit;
}

// ---------------------------------------------------------------------------

Sampler::Sampler(const Parameters& params, const QTensorField* reference) : params_(params) {
  if (reference) reference_.emplace(*reference);
}

DiagnosticsRow Sampler::sample(const SimState& state) {
  DiagnosticsRow row;
  row.t = state.t;
  const auto e = total_energy(state, params_);
  row.E_total = e.total;
  row.E_kinetic = e.kinetic;
  row.E_elastic = e.elastic;
  row.E_bulk = e.bulk;
  row.grad_u_L2sq = grad_u_l2sq(state.u);
  row.H_L2sq = h_l2sq(state.Q, params_);
  row.A = row.grad_u_L2sq + params_.lambda * row.H_L2sq;
  row.B = std::numbers::e + std::log(std::numbers::e + row.A);
  row.div_u_max = sp::max_divergence(state.u);
  row.Q_Linf = state.Q.max_norm();
  row.u_H1 = u_h1_norm(state.u);
  if (reference_) row.Q_minus_Qinf_H2 = q_h2_distance(state.Q, *reference_);

  const double diss = params_.nu * row.grad_u_L2sq + params_.lambda * params_.gamma * row.H_L2sq;
  if (has_previous_ && state.t > t_prev_) {
    row.energy_residual = (row.E_total - e_prev_) / (state.t - t_prev_) + 0.5 * (diss + d_prev_);
  }
  has_previous_ = true;
  t_prev_ = state.t;
  e_prev_ = row.E_total;
  d_prev_ = diss;
  return row;
}

}  // namespace nematic::diagnostics
