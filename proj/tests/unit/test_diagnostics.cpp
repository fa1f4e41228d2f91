#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "nematic/diagnostics.hpp"
#include "nematic/energetics.hpp"
#include "nematic/initial_conditions.hpp"
#include "nematic/stepper.hpp"
#include "nematic/verify.hpp"
#include "oracle/oracle.hpp"
#include "support.hpp"

using namespace nematic;
namespace dg = nematic::diagnostics;
namespace st = nematic::stepper;
using test::kTwoPi;

TEST_SUITE("diagnostics") {
  TEST_CASE("energies of simple states") {
    const Grid g(32);
    Parameters P;
    const auto zero = dg::total_energy(SimState(g), P);
    CHECK(zero.total == 0.0);
    const SimState tg(0.0, initial::taylor_green(g, 1.0), QTensorField(g));
    CHECK(dg::total_energy(tg, P).kinetic == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(dg::grad_u_l2sq(tg.u) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));
    P.a = 0.0;
    CHECK(dg::higher_energy_A(tg, P) == doctest::Approx(kTwoPi * kTwoPi).epsilon(1e-13));
    CHECK(dg::dissipation(tg, P) == doctest::Approx(P.nu * kTwoPi * kTwoPi).epsilon(1e-13));
  }

  TEST_CASE("A scales the molecular field by lambda") {
    const Grid g(32);
    Parameters P;
    const SimState s(0.0, test::trig_velocity(g, 1, 3), test::trig_q(g, 2, 3, 0.4, 0.3));
    const double a1 = dg::higher_energy_A(s, P);
    P.lambda = 2.0;
    const double a2 = dg::higher_energy_A(s, P);
    CHECK(a2 - a1 == doctest::Approx(dg::h_l2sq(s.Q, P)).epsilon(1e-12));
    CHECK(a1 == doctest::Approx(dg::grad_u_l2sq(s.u) + dg::h_l2sq(s.Q, P)).epsilon(1e-14));
    P.L = 1.0;
    CHECK(dg::identity_functional(s, P) == doctest::Approx(dg::higher_energy_A(s, P)).epsilon(1e-14));
  }

  TEST_CASE("energy law residual") {
    CHECK_THROWS_AS(dg::energy_law_residual({1.0, 2.0}, {0.0, 0.0}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(dg::energy_law_residual({1.0, 2.0, 3.0}, {0.0, 0.0}, 0.1), std::invalid_argument);
    // E = exp(-t) with D = exp(-t): centered differences give r = D (1 - sinh(h)/h).
    std::vector<double> E, D;
    const double h = 0.01;
    for (int k = 0; k < 50; ++k) {
      E.push_back(std::exp(-k * h));
      D.push_back(std::exp(-k * h));
    }
    const auto r = dg::energy_law_residual(E, D, h);
    REQUIRE(r.residual.size() == 48);
    CHECK(r.residual[0] == doctest::Approx(D[1] * (1 - std::sinh(h) / h)).epsilon(1e-8));
    CHECK(r.max_relative == doctest::Approx(std::sinh(h) / h - 1).epsilon(1e-6));

    const Grid g(16);
    Parameters P;
    const SimState eq(0.0, VelocityField(g), initial::uniform_equilibrium(g, P, 0.0));
    std::vector<double> e3, d3;
    SimState s = eq;
    for (int k = 0; k < 3; ++k) {
      e3.push_back(dg::total_energy(s, P).total);
      d3.push_back(dg::dissipation(s, P));
      s = st::step(s, 1e-2, P);
    }
    for (double v : dg::energy_law_residual(e3, d3, 1e-2).residual) CHECK(std::abs(v) <= 1e-12);
  }

  TEST_CASE("identity terms at the steady state vanish") {
    const Grid g(32);
    Parameters P;
    const SimState eq(0.0, VelocityField(g), initial::uniform_equilibrium(g, P, 0.4));
    const auto T = dg::identity_terms(eq, P);
    for (double j : T.J) CHECK(std::abs(j) <= 1e-12);
    CHECK(T.viscous == 0.0);
    CHECK(std::abs(T.relaxation) <= 1e-12);
    CHECK(dg::identity_residual(eq, P, 1e-4).residual <= 1e-10);
  }

  TEST_CASE("identity terms agree with the oracle") {
    const Grid g(32);
    for (double L : {1.0, 0.2}) {
      Parameters P;
      P.L = L;
      P.xi = 0.7;
      P.lambda = 1.3;
      const SimState s = st::prepare(verify::band_limited_state(g, P, 31, 2, 2));
      const auto T = dg::identity_terms(s, P);
      const auto R = oracle::Oracle(s, P, 2, 2).identity(64);
      double scale = 0.0;
      for (double j : R.J) scale = std::max(scale, std::abs(j));
      for (int i = 0; i < 12; ++i) {
        INFO("J", i + 1, " library ", T.J[i], " oracle ", R.J[i]);
        CHECK(std::abs(T.J[i] - R.J[i]) <= 1e-6 * std::abs(R.J[i]) + 1e-10 * scale);
      }
      CHECK(T.viscous == doctest::Approx(R.viscous).epsilon(1e-9));
      CHECK(T.relaxation == doctest::Approx(R.relaxation).epsilon(1e-9));
    }
  }

  TEST_CASE("co-rotational coupling removes the xi terms") {
    const Grid g(32);
    Parameters P;
    P.xi = 0.0;
    const SimState s = st::prepare(verify::band_limited_state(g, P, 41, 2, 2));
    const auto T = dg::identity_terms(s, P);
    for (int i = 5; i <= 8; ++i) CHECK(std::abs(T.J[i]) <= 1e-12);
  }

  TEST_CASE("identity residual shrinks with the probe step") {
    const Grid g(32);
    Parameters P;
    const SimState s = verify::band_limited_state(g, P, 51, 2, 2);
    const auto sweep = verify::identity_sweep(s, P, {1e-4, 5e-5, 2.5e-5});
    std::vector<double> r;
    for (const auto& p : sweep) r.push_back(p.residual.residual);
    CHECK(r.back() <= 1e-3);
    CHECK(verify::decays(r, 0.6));
  }

  TEST_CASE("identity closes for general constants") {
    const Grid g(32);
    Parameters P;
    P.nu = 0.7;
    P.lambda = 1.7;
    P.gamma = 0.6;
    P.L = 0.3;
    P.a = -0.5;
    P.c = 2.0;
    P.xi = -0.8;
    const SimState s = verify::band_limited_state(g, P, 71, 2, 2);
    const auto sweep = verify::identity_sweep(s, P, {1e-4, 5e-5, 2.5e-5});
    std::vector<double> r;
    for (const auto& p : sweep) r.push_back(p.residual.residual);
    CHECK(r.back() <= 1e-3);
    CHECK(verify::decays(r, 0.6));
  }

  TEST_CASE("identity residual is resolved in space") {
    Parameters P;
    auto state = [](int n) {
      const Grid g(n);
      VelocityField u = test::trig_velocity(g, 61, 2);
      u *= 0.2;
      return SimState(0.0, u, test::trig_q(g, 62, 2, 0.1, 0.7));
    };
    const SimState s64 = state(64), s128 = state(128);
    const auto a = dg::identity_residual(s64, P, 5e-5), b = dg::identity_residual(s128, P, 5e-5);
    CHECK(std::abs(a.rhs - b.rhs) <= 1e-6 * (1.0 + std::abs(b.rhs)));
    CHECK(std::abs(a.lhs - b.lhs) <= 1e-6 * (1.0 + std::abs(b.lhs)));
  }

  TEST_CASE("omega-limit detection") {
    const Grid g(16);
    Parameters P;
    const SimState eq(0.0, VelocityField(g), initial::uniform_equilibrium(g, P, 0.1));
    CHECK(dg::omega_limit_check(eq, P, 1e-8, 1e-8));
    const SimState moving = verify::band_limited_state(g, P, 3, 2, 3);
    CHECK_FALSE(dg::omega_limit_check(moving, P, 1e-6, 1e-6));
    CHECK_THROWS_AS(dg::omega_limit_check(eq, P, 0.0, 1e-8), std::invalid_argument);
  }

  TEST_CASE("Lyapunov functional") {
    const Grid g(32);
    Parameters P;
    const QTensorField Qinf = initial::uniform_equilibrium(g, P, 0.0);
    const double mu = dg::lyapunov_mu(P, 2.0);
    CHECK(dg::bulk_hessian_bound(P, 2.0) == doctest::Approx(5.0));
    CHECK(mu == doctest::Approx(2.0 + 2.0 * P.lambda * P.lambda * 5.0));
    CHECK(dg::lyapunov_Y(SimState(0.0, VelocityField(g), Qinf), Qinf, mu, P) == doctest::Approx(0.0));
    CHECK_THROWS_AS(dg::lyapunov_Y(SimState(g), test::trig_q(g, 1, 2), mu, P), std::invalid_argument);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SimState s(0.0, test::trig_velocity(g, seed, 3), test::trig_q(g, seed, 3, 0.5, 0.4));
      CHECK(dg::lyapunov_Y(s, Qinf, mu, P) >= 0.0);
    }
  }

  TEST_CASE("rate fits") {
    std::vector<double> t, poly, expo, flat;
    for (int k = 0; k < 200; ++k) {
      t.push_back(0.5 * k);
      poly.push_back(3.0 / (1.0 + 0.5 * k));
      expo.push_back(2.0 * std::exp(-0.5 * k));
      flat.push_back(1.0 + 0.01 * k);
    }
    const auto p = dg::fit_convergence_rate(t, poly);
    CHECK_FALSE(p.refused);
    CHECK(p.theta_hat == doctest::Approx(1.0 / 3).epsilon(1e-3));
    CHECK(p.theta_in_theory);
    CHECK(p.preference == "polynomial");
    const auto e = dg::fit_convergence_rate(t, expo);
    CHECK(e.exp_rate == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.preference == "exponential");
    std::vector<double> sq;
    for (double v : poly) sq.push_back(v * v);
    CHECK(dg::fit_convergence_rate(t, sq, 2).theta_hat == doctest::Approx(1.0 / 3).epsilon(1e-3));
    CHECK(dg::fit_convergence_rate(t, flat).refused);
    CHECK(dg::fit_convergence_rate({0, 1, 2}, {1, 0.5, 0.25}).refused);
    std::vector<double> bad = poly;
    bad[4] = 0.0;
    CHECK(dg::fit_convergence_rate(t, bad).refused);
  }

  TEST_CASE("sampled rows") {
    const Grid g(32);
    Parameters P;
    const QTensorField Qinf = initial::uniform_equilibrium(g, P, 0.0);
    dg::Sampler sampler(P, &Qinf);
    const SimState s = st::prepare(verify::band_limited_state(g, P, 5, 2, 3));
    const DiagnosticsRow r0 = sampler.sample(s);
    CHECK(std::isnan(r0.energy_residual));
    CHECK(r0.A == r0.grad_u_L2sq + P.lambda * r0.H_L2sq);
    CHECK(r0.E_total == r0.E_kinetic + r0.E_elastic + r0.E_bulk);
    CHECK(r0.B >= std::exp(1.0));
    CHECK(r0.div_u_max <= 1e-12);
    CHECK(std::isfinite(r0.Q_minus_Qinf_H2));
    const DiagnosticsRow r1 = sampler.sample(st::step(s, 1e-3, P));
    CHECK(std::isfinite(r1.energy_residual));
    CHECK(DiagnosticsRow::from_values(r1.values()).values() == r1.values());
    CHECK(DiagnosticsRow::column_names().size() == DiagnosticsRow::kColumns);
  }

  TEST_CASE("co-rotational runs keep the order parameter bounded") {
    const Grid g(32);
    Parameters P;
    P.xi = 0.0;
    const SimState s = verify::band_limited_state(g, P, 7, 2, 3);
    st::StepperConfig c;
    c.t_end = 0.5;
    c.sample_every = 10;
    const double q0 = st::prepare(s).Q.max_norm();
    const double bound = std::max(q0, std::sqrt(-P.a / P.c));
    double worst = 0.0;
    st::run(s, P, c, [&](const SimState& x, const DiagnosticsRow&) {
      worst = std::max(worst, x.Q.max_norm());
      return false;
    });
    CHECK(worst <= bound + 1e-3);
  }
}
