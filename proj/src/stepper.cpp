#include "nematic/stepper.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>

#include "nematic/coupling.hpp"
#include "nematic/diagnostics.hpp"
#include "nematic/energetics.hpp"
#include "nematic/spectral.hpp"

namespace nematic::stepper {

namespace sp = nematic::spectral;

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "euler") return Scheme::euler;
  if (name == "ars222") return Scheme::ars222;
  return std::nullopt;
}

std::string scheme_name(Scheme s) { return s == Scheme::euler ? "euler" : "ars222"; }

std::vector<std::string> StepperConfig::validate() const {
  std::vector<std::string> errors;
  if (!(dt > 0.0) || !std::isfinite(dt)) errors.push_back("dt must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) errors.push_back("cfl must lie in (0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) errors.push_back("t_end must be non-negative");
  if (sample_every == 0) errors.push_back("diagnostics_every must be at least 1");
  return errors;
}

BlowUpError::BlowUpError(const std::string& what, std::string term, SimState state)
    : std::runtime_error(what), term_(std::move(term)), state_(std::move(state)) {}

RhsTerms::RhsTerms(Grid grid)
    : advection_u(grid),
      elastic_force(grid),
      viscous(grid),
      advection_q(grid),
      stretching(grid),
      reaction(grid),
      elastic_diffusion(grid) {}

namespace {

// Spectra of the four state components.
struct StateSpectra {
  sp::SpectralField u1, u2, p, q;

  explicit StateSpectra(const SimState& s)
      : u1(sp::forward(s.u.u1)), u2(sp::forward(s.u.u2)), p(sp::forward(s.Q.p)), q(sp::forward(s.Q.q)) {}
  StateSpectra(const VelocityField& u, const QTensorField& Q)
      : u1(sp::forward(u.u1)), u2(sp::forward(u.u2)), p(sp::forward(Q.p)), q(sp::forward(Q.q)) {}

  template <class F>
  void each(F&& f) {
    f(u1, true);
    f(u2, true);
    f(p, false);
    f(q, false);
  }
  StateSpectra& add_scaled(double s, const StateSpectra& o) {
    u1.add_scaled(s, o.u1);
    u2.add_scaled(s, o.u2);
    p.add_scaled(s, o.p);
    q.add_scaled(s, o.q);
    return *this;
  }
  void finish() {
    sp::leray_project_inplace(u1, u2);
    each([](sp::SpectralField& f, bool) { sp::dealias_inplace(f); });
  }
  SimState to_state(double t) const {
    return SimState(t, VelocityField(sp::inverse(u1), sp::inverse(u2)),
                    QTensorField(sp::inverse(p), sp::inverse(q)));
  }
};

using Complex = std::complex<double>;
using Block = std::array<std::array<Complex, 4>, 4>;

// Linear operator of the system at (u = 0, Q = Qbar), Qbar constant, acting per
// Fourier mode on (u1, u2, p, q). Diagonal: nu Lap and Gamma L Lap. With
// coupling: the stretching S(grad u, Qbar) and the projected force
// lambda P div T(L Lap Q), T(X) = tau_X + Qbar X - X Qbar with tau_X the part of
// tau linear in H evaluated at H = X.
class LinearPart {
 public:
  LinearPart(const Parameters& params, const Grid& grid, double pbar, double qbar, bool coupled)
      : params_(params), n_(grid.n()), cut_(grid.dealias_cutoff()), coupled_(coupled) {
    const Mat2 qbar_m = q_matrix(pbar, qbar);
    const Mat2 qh = qbar_m + 0.5 * Mat2::identity();
    const double xi = params.xi;
    const double sign = params.corrupt_tau_sign ? -1.0 : 1.0;
    // Stretching of the unit gradients e_m e_j^T, reduced to (p, q).
    for (int m = 0; m < 2; ++m) {
      for (int j = 0; j < 2; ++j) {
        Mat2 g;
        g(m, j) = 1.0;
        const Mat2 D = 0.5 * (g + g.transpose());
        const Mat2 W = 0.5 * (g - g.transpose());
        const Mat2 S = (xi * D + W) * qh + qh * (xi * D - W) - (2.0 * xi * (qbar_m * g).trace()) * qh;
        stretch_[m][j][0] = 0.5 * (S(0, 0) - S(1, 1));
        stretch_[m][j][1] = 0.5 * (S(0, 1) + S(1, 0));
      }
    }
    const Mat2 basis[2] = {q_matrix(1.0, 0.0), q_matrix(0.0, 1.0)};
    for (int b = 0; b < 2; ++b) {
      const Mat2& X = basis[b];
      const Mat2 tau = (-xi) * (qh * X + X * qh) + (2.0 * xi * frobenius(qbar_m, X)) * qh;
      stress_[b] = sign * tau + (qbar_m * X - X * qbar_m);
    }
    build_blocks();
  }

  Block matrix(int k1, int k2) const {
    const double two_pi = 2.0 * std::numbers::pi;
    const double kappa[2] = {two_pi * k1, two_pi * k2};
    const double ksq = kappa[0] * kappa[0] + kappa[1] * kappa[1];
    Block out{};
    out[0][0] = out[1][1] = -params_.nu * ksq;
    out[2][2] = out[3][3] = -params_.gamma * params_.L * ksq;
    const bool nyquist = std::abs(k1) == n_ / 2 || std::abs(k2) == n_ / 2;
    if (!coupled_ || ksq == 0.0 || nyquist) return out;
    const Complex i(0.0, 1.0);
    // Q rows: S(i u kappa^T) = i sum_m u_m sum_j kappa_j S(e_m e_j^T).
    for (int c = 0; c < 2; ++c) {
      for (int m = 0; m < 2; ++m) {
        double v = 0.0;
        for (int j = 0; j < 2; ++j) v += kappa[j] * stretch_[m][j][c];
        out[2 + c][m] += i * v;
      }
    }
    // u rows: lambda P (i kappa_j T_ij(-L |kappa|^2 X_b)).
    for (int b = 0; b < 2; ++b) {
      Complex f[2];
      for (int r = 0; r < 2; ++r) {
        double v = 0.0;
        for (int j = 0; j < 2; ++j) v += stress_[b](r, j) * kappa[j];
        f[r] = params_.lambda * i * v * (-params_.L * ksq);
      }
      const Complex dot = (kappa[0] * f[0] + kappa[1] * f[1]) / ksq;
      out[0][2 + b] += f[0] - kappa[0] * dot;
      out[1][2 + b] += f[1] - kappa[1] * dot;
    }
    return out;
  }

  // s <- M s
  void apply(StateSpectra& s) const {
    for_each_mode(s, [&](std::size_t m, Complex* v) {
      const Block& a = blocks_[m];
      Complex out[4];
      for (int r = 0; r < 4; ++r) {
        out[r] = 0.0;
        for (int c = 0; c < 4; ++c) out[r] += a[r][c] * v[c];
      }
      for (int r = 0; r < 4; ++r) v[r] = out[r];
    });
  }

  // s <- M s without the diagonal diffusion (the explicit counterpart).
  void apply_coupling(StateSpectra& s) const {
    for_each_mode(s, [&](std::size_t m, Complex* v) {
      const Block& a = blocks_[m];
      Complex out[4];
      for (int r = 0; r < 4; ++r) {
        out[r] = 0.0;
        for (int c = 0; c < 4; ++c) {
          if (c != r) out[r] += a[r][c] * v[c];
        }
      }
      for (int r = 0; r < 4; ++r) v[r] = out[r];
    });
  }

  // s <- (I - h M)^-1 s. The factorization is kept for repeated solves with the same h.
  void solve(StateSpectra& s, double h) const {
    if (h != factored_h_) factor(h);
    for_each_mode(s, [&](std::size_t m, Complex* v) { lu_[m].solve(v); });
  }

 private:
  // LU factors with partial pivoting of one 4 x 4 block.
  struct Lu {
    Block a{};
    std::array<int, 4> piv{};

    void factor() {
      for (int col = 0; col < 4; ++col) {
        int p = col;
        for (int r = col + 1; r < 4; ++r)
          if (std::abs(a[r][col]) > std::abs(a[p][col])) p = r;
        piv[col] = p;
        if (p != col) std::swap(a[p], a[col]);
        for (int r = col + 1; r < 4; ++r) {
          const Complex f = a[r][col] / a[col][col];
          a[r][col] = f;
          for (int c = col + 1; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
      }
    }
    void solve(Complex* v) const {
      for (int col = 0; col < 4; ++col) {
        if (piv[col] != col) std::swap(v[piv[col]], v[col]);
        for (int r = col + 1; r < 4; ++r) v[r] -= a[r][col] * v[col];
      }
      for (int r = 3; r >= 0; --r) {
        Complex acc = v[r];
        for (int c = r + 1; c < 4; ++c) acc -= a[r][c] * v[c];
        v[r] = acc / a[r][r];
      }
    }
  };

  void factor(double h) const {
    lu_.resize(blocks_.size());
    for (std::size_t m = 0; m < blocks_.size(); ++m) {
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) lu_[m].a[r][c] = (r == c ? 1.0 : 0.0) - h * blocks_[m][r][c];
      lu_[m].factor();
    }
    factored_h_ = h;
  }

  // Visits the modes kept by the 2/3 rule in storage order; every other mode is
  // set to zero, as the dealiased state carries none.
  template <class F>
  void for_each_mode(StateSpectra& s, F&& f) const {
    const int rows = s.p.rows();
    const int cols = s.p.cols();
    std::size_t m = 0;
    for (int r = 0; r < rows; ++r) {
      const int k1 = sp::SpectralField::wavenumber(r, n_);
      for (int c = 0; c < cols; ++c) {
        if (!retained(k1, c)) {
          s.u1(r, c) = s.u2(r, c) = s.p(r, c) = s.q(r, c) = 0.0;
          continue;
        }
        Complex v[4] = {s.u1(r, c), s.u2(r, c), s.p(r, c), s.q(r, c)};
        f(m++, v);
        s.u1(r, c) = v[0];
        s.u2(r, c) = v[1];
        s.p(r, c) = v[2];
        s.q(r, c) = v[3];
      }
    }
  }

  bool retained(int k1, int k2) const { return std::max(std::abs(k1), k2) <= cut_; }

  void build_blocks() {
    for (int r = 0; r < n_; ++r) {
      const int k1 = sp::SpectralField::wavenumber(r, n_);
      for (int c = 0; c <= n_ / 2; ++c)
        if (retained(k1, c)) blocks_.push_back(matrix(k1, c));
    }
  }

  std::vector<Block> blocks_;
  mutable std::vector<Lu> lu_;
  mutable double factored_h_ = std::numeric_limits<double>::quiet_NaN();
  Parameters params_;
  int n_;
  int cut_;
  bool coupled_;
  double stretch_[2][2][2] = {};
  Mat2 stress_[2];
};

LinearPart linear_part(const StateSpectra& s, const Parameters& params, const Grid& grid, bool coupled) {
  return LinearPart(params, grid, s.p(0, 0).real(), s.q(0, 0).real(), coupled);
}

bool finite(const VelocityField& u) { return u.u1.all_finite() && u.u2.all_finite(); }
bool finite(const QTensorField& Q) { return Q.p.all_finite() && Q.q.all_finite(); }

template <class Field>
void require_finite(const Field& f, const char* term, const SimState& state) {
  if (!finite(f)) {
    throw BlowUpError(std::string("non-finite value in ") + term + " at t = " + std::to_string(state.t),
                      term, state);
  }
}

void check_state(const SimState& s) {
  if (!finite(s.u) || !finite(s.Q)) throw BlowUpError("non-finite state at t = " + std::to_string(s.t), "state", s);
  const double um = s.u.max_norm();
  const double qm = s.Q.max_norm();
  if (um > kBlowUpThreshold || qm > kBlowUpThreshold) {
    throw BlowUpError("blow-up at t = " + std::to_string(s.t) + " (|u|_inf = " + std::to_string(um) +
                          ", |Q|_inf = " + std::to_string(qm) + ")",
                      "state", s);
  }
}

}  // namespace

namespace {

// Fills every term; the two linear diffusions only when asked.
RhsTerms evaluate_terms(const SimState& state, const Parameters& params, bool diffusion) {
  RhsTerms r(state.grid());
  const coupling::ResolvedState rs = coupling::resolve_state(state, params);

  r.advection_u = sp::leray_project(coupling::advect_u(rs));
  require_finite(r.advection_u, "advection_u", state);
  r.elastic_force = sp::leray_project(coupling::elastic_force(rs, params));
  require_finite(r.elastic_force, "elastic_force", state);
  r.advection_q = coupling::advect_q(rs);
  require_finite(r.advection_q, "advection_q", state);
  r.stretching = coupling::stretching(rs, params);
  require_finite(r.stretching, "stretching", state);
  r.reaction = rs.F;
  r.reaction *= params.gamma;
  require_finite(r.reaction, "reaction", state);
  if (!diffusion) return r;

  r.viscous = VelocityField(sp::inverse(sp::laplacian(rs.u1_hat)), sp::inverse(sp::laplacian(rs.u2_hat)));
  r.viscous *= params.nu;
  require_finite(r.viscous, "viscous", state);
  r.elastic_diffusion = QTensorField(sp::inverse(sp::laplacian(rs.p_hat)), sp::inverse(sp::laplacian(rs.q_hat)));
  r.elastic_diffusion *= params.gamma * params.L;
  require_finite(r.elastic_diffusion, "elastic_diffusion", state);
  return r;
}

}  // namespace

RhsTerms rhs_terms(const SimState& state, const Parameters& params) {
  return evaluate_terms(state, params, true);
}

Rhs explicit_rhs(const SimState& state, const Parameters& params) {
  RhsTerms r = evaluate_terms(state, params, false);
  Rhs out{std::move(r.elastic_force), std::move(r.stretching)};
  out.du -= r.advection_u;
  out.dQ -= r.advection_q;
  out.dQ += r.reaction;
  return out;
}

Rhs rhs(const SimState& state, const Parameters& params) {
  RhsTerms r = rhs_terms(state, params);
  Rhs out{std::move(r.elastic_force), std::move(r.stretching)};
  out.du -= r.advection_u;
  out.du += r.viscous;
  out.dQ -= r.advection_q;
  out.dQ += r.reaction;
  out.dQ += r.elastic_diffusion;
  return out;
}

SimState prepare(const SimState& state) {
  StateSpectra s(state);
  s.finish();
  return s.to_state(state.t);
}

SimState step(const SimState& state, double dt, const Parameters& params, const StepOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("step requires dt > 0");
  const StateSpectra s0(state);
  const LinearPart M = linear_part(s0, params, state.grid(), options.implicit_coupling);
  // Explicit stage value: N(Y) minus the coupling moved to the implicit side.
  auto explicit_part = [&](const SimState& y, const StateSpectra& ys) {
    const Rhs n = explicit_rhs(y, params);
    StateSpectra k(n.du, n.dQ);
    StateSpectra c = ys;
    M.apply_coupling(c);
    k.add_scaled(-1.0, c);
    return k;
  };

  SimState next(state.grid());
  if (options.scheme == Scheme::euler) {
    StateSpectra y = s0;
    y.add_scaled(dt, explicit_part(state, s0));
    M.solve(y, dt);
    y.finish();
    next = y.to_state(state.t + dt);
  } else {
    // ARS(2,2,2): gamma = 1 - 1/sqrt(2), delta = 1 - 1/(2 gamma).
    const double g = 1.0 - 1.0 / std::numbers::sqrt2;
    const double d = 1.0 - 1.0 / (2.0 * g);
    const StateSpectra k1 = explicit_part(state, s0);

    StateSpectra y2 = s0;
    y2.add_scaled(g * dt, k1);
    M.solve(y2, g * dt);
    sp::leray_project_inplace(y2.u1, y2.u2);
    const SimState stage = y2.to_state(state.t + g * dt);
    const StateSpectra k2 = explicit_part(stage, y2);

    StateSpectra my2 = y2;
    M.apply(my2);
    StateSpectra y3 = s0;
    y3.add_scaled(d * dt, k1);
    y3.add_scaled((1.0 - d) * dt, k2);
    y3.add_scaled((1.0 - g) * dt, my2);
    M.solve(y3, g * dt);
    y3.finish();
    next = y3.to_state(state.t + dt);
  }
  check_state(next);
  return next;
}

double cfl_dt(const SimState& state, const Parameters& params, const StepperConfig& config) {
  const double inf = std::numeric_limits<double>::infinity();
  const double dx = state.grid().dx();
  const double umax = state.u.max_norm();
  const double qmax = state.Q.max_norm();
  const double xi = std::abs(params.xi);
  const double advective = umax > 0.0 ? dx / umax : inf;
  const double vs = (xi + 2.0 * qmax + 4.0 * xi * qmax * qmax) * umax;
  const double stretch = vs > 0.0 ? dx / vs : inf;
  const double rate = params.gamma * (std::abs(params.a) + 3.0 * params.c * qmax * qmax);
  const double reaction = rate > 0.0 ? 1.0 / rate : inf;
  const double bound = config.cfl * std::min({advective, stretch, reaction});
  return std::min(config.dt, bound);
}

RunResult run(const SimState& initial, const Parameters& params, const StepperConfig& config,
              const Observer& observer, const Checkpoint& checkpoint, const QTensorField* reference) {
  diagnostics::Sampler sampler(params, reference);
  RunResult result{prepare(initial)};
  auto observe = [&]() {
    if (!observer) return false;
    return observer(result.state, sampler.sample(result.state));
  };
  if (observe()) {
    result.stopped_by_observer = true;
    return result;
  }
  const double eps = 1e-12 * std::max(1.0, config.t_end);
  while (result.state.t < config.t_end - eps) {
    double dt = config.adaptive ? cfl_dt(result.state, params, config) : config.dt;
    dt = std::min(dt, config.t_end - result.state.t);
    try {
      result.state = step(result.state, dt, params, {config.scheme, config.implicit_coupling});
    } catch (const BlowUpError&) {
      if (checkpoint) checkpoint(result.state);
      throw;
    }
    ++result.steps;
    if (result.steps % config.sample_every == 0 && observe()) {
      result.stopped_by_observer = true;
      break;
    }
  }
  return result;
}

}  // namespace nematic::stepper
