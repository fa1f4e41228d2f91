#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nematic/energetics.hpp"
#include "nematic/initial_conditions.hpp"
#include "nematic/verify.hpp"
#include "oracle/oracle.hpp"
#include "support.hpp"

using namespace nematic;
namespace en = nematic::energetics;
using test::kTwoPi;

namespace {

// Composite Simpson rule on [0, 1].
template <class F>
double simpson(F f, int intervals = 4000) {
  const double h = 1.0 / intervals;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

// Minimum of a r + c r^2 over r >= 0 by golden-section search.
double bulk_minimum(double a, double c) {
  auto f = [&](double r) { return a * r + c * r * r; };
  double lo = 0.0, hi = 10.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    if (f(m1) < f(m2)) hi = m2;
    else lo = m1;
  }
  return f(0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE("energetics") {
  TEST_CASE("bulk density") {
    const Grid g(8);
    const Parameters P;  // a = -1, c = 1
    CHECK(en::bulk_density(QTensorField(g), P).max_abs() == 0.0);
    const ScalarField f = en::bulk_density(initial::constant_q(g, 0.5, 0.5), P);
    CHECK(f(3, 4) == doctest::Approx(-0.25));
    for (double a : {-2.0, -1.0, -0.3}) {
      Parameters Q = P;
      Q.a = a;
      Q.c = 1.7;
      const double expect = -a * a / (4 * Q.c);
      CHECK(bulk_minimum(a, Q.c) == doctest::Approx(expect).epsilon(1e-10));
      const QTensorField eq = initial::uniform_equilibrium(g, Q, 0.3);
      CHECK(en::bulk_energy(eq, Q) == doctest::Approx(expect).epsilon(1e-13));
      const ScalarField r = en::bulk_density(test::trig_q(g, 4, 3, 1.0), Q);
      for (std::size_t k = 0; k < r.size(); ++k) CHECK(r[k] >= expect - 1e-14);
    }
  }

  TEST_CASE("free energy of a single mode against quadrature") {
    const Grid g(32);
    Parameters P;
    P.L = 0.37;
    P.a = -0.8;
    P.c = 1.3;
    for (double eps : {1e-3, 0.1, 0.7}) {
      const QTensorField Q(test::sample(g, [&](double x1, double) { return eps * std::sin(kTwoPi * x1); }),
                           ScalarField(g));
      // |grad Q|^2 = 2 |grad p|^2, f_B = a p^2 + c p^4; integrand depends on x1 only.
      const double expect = simpson([&](double x) {
        const double p = eps * std::sin(kTwoPi * x), dp = eps * kTwoPi * std::cos(kTwoPi * x);
        return 0.5 * P.L * 2.0 * dp * dp + P.a * p * p + P.c * p * p * p * p;
      });
      CHECK(std::abs(en::free_energy(Q, P) - expect) <= 1e-8 * std::abs(expect));
    }
  }

  TEST_CASE("energy breakdown") {
    const Grid g(16);
    const Parameters P;
    SimState s(0.0, test::trig_velocity(g, 1, 2), test::trig_q(g, 2, 2));
    const auto e = en::energy_breakdown(s, P);
    CHECK(e.kinetic == doctest::Approx(0.5 * inner(s.u, s.u)));
    CHECK(e.total == e.kinetic + e.elastic + e.bulk);
    CHECK(e.elastic == doctest::Approx(P.lambda * en::elastic_energy(s.Q, P)));
    CHECK(e.bulk == doctest::Approx(P.lambda * en::bulk_energy(s.Q, P)));
  }

  TEST_CASE("molecular field") {
    const Grid g(64);
    Parameters P;
    P.L = 0.2;
    CHECK(test::max_abs(en::molecular_field(QTensorField(g), P)) == 0.0);
    for (double angle : {0.0, 0.4, -1.1})
      CHECK(test::max_abs(en::molecular_field(initial::uniform_equilibrium(g, P, angle), P)) <= 1e-14);

    // Against the full-matrix oracle; band 3 keeps the cubic term resolved after dealiasing.
    const QTensorField Q = test::trig_q(g, 17, 3, 0.4, 0.3);
    const QTensorField H = en::molecular_field(Q, P);
    const oracle::Oracle O(SimState(0.0, VelocityField(g), Q), P, 1, 3);
    double scale = 0.0, err = 0.0;
    for (int i = 0; i < 64; i += 5)
      for (int j = 0; j < 64; j += 3) {
        const oracle::MD h = oracle::value(O.at(g.coordinate(i), g.coordinate(j)).H);
        scale = std::max(scale, std::abs(h(0, 0)) + std::abs(h(0, 1)));
        err = std::max({err, std::abs(h(0, 0) - H.p(i, j)), std::abs(-h(1, 1) - H.p(i, j)),
                        std::abs(h(0, 1) - H.q(i, j)), std::abs(h(1, 0) - H.q(i, j))});
      }
    CHECK(err <= 1e-10 * scale);
  }

  TEST_CASE("variational consistency of H") {
    const Grid g(32);
    Parameters P;
    P.L = 0.3;
    CHECK(verify::variational_consistency(g, P, 5, 20, 1e-4) <= 1e-6);
    P.a = 0.7;
    P.c = 2.0;
    CHECK(verify::variational_consistency(g, P, 6, 20, 1e-4) <= 1e-6);
  }

  TEST_CASE("linearized bulk map") {
    const Grid g(16);
    Parameters P;
    P.a = -0.6;
    P.c = 1.4;
    const QTensorField X = test::trig_q(g, 30, 3, 0.5);
    const QTensorField Y = test::trig_q(g, 31, 3, 0.5);
    const QTensorField Z = en::linearized_F(QTensorField(g), X, P);
    QTensorField aX = X;
    aX *= -P.a;
    CHECK(test::max_diff(Z, aX) <= 1e-15);

    const QTensorField Q = test::trig_q(g, 32, 3, 0.8, 0.2);
    const double e = 1e-5;
    QTensorField qp = X, qm = X;
    qp *= e;
    qp += Q;
    qm *= -e;
    qm += Q;
    QTensorField fd = en::bulk_field(qp, P);
    fd -= en::bulk_field(qm, P);
    fd *= 1.0 / (2 * e);
    const QTensorField dF = en::linearized_F(Q, X, P);
    CHECK(test::max_diff(fd, dF) <= 1e-8 * test::max_abs(dF));

    const double xy = inner(en::linearized_F(Q, X, P), Y);
    const double yx = inner(en::linearized_F(Q, Y, P), X);
    CHECK(std::abs(xy - yx) <= 1e-13 * (1.0 + std::abs(xy)));
  }

  TEST_CASE("lower bound") {
    Parameters P;
    CHECK(en::lower_bound_constant(P) == 1.0);
    P.a = 2.0;
    CHECK(en::lower_bound_constant(P) == 0.0);
    P.a = -1.0;
    P.lambda = 2.0;
    P.c = 0.5;
    CHECK(en::energy_lower_bound(P) == doctest::Approx(-2.0 * 4.0 / 0.5));
    const Grid g(16);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const SimState s(0.0, test::trig_velocity(g, seed, 3), test::trig_q(g, seed, 3, 3.0));
      CHECK(en::energy_breakdown(s, P).total >= en::energy_lower_bound(P));
    }
  }

  TEST_CASE("relaxation") {
    const Grid g(32);
    Parameters P;
    P.L = 0.1;
    CHECK_THROWS_AS(en::relax_to_equilibrium(QTensorField(g), P, 0.0, 10), std::invalid_argument);

    SUBCASE("an equilibrium is a fixed point") {
      const QTensorField eq = initial::uniform_equilibrium(g, P, 0.2);
      const auto r = en::relax_to_equilibrium(eq, P, 1e-10, 100);
      CHECK(r.converged);
      CHECK(r.residual <= 1e-12);
      CHECK(test::max_diff(r.Q, eq) <= 1e-12);
    }
    SUBCASE("a perturbed equilibrium relaxes to a uniform minimizer") {
      const QTensorField Q0 = initial::perturbed_equilibrium(g, P, 0.3, 9, 0.2, 1.0, 3);
      const auto r = en::relax_to_equilibrium(Q0, P, 1e-9, 200000);
      CHECK(r.converged);
      CHECK(r.energy_monotone);
      CHECK(r.residual <= 1e-9);
      CHECK(en::l2_norm(en::molecular_field(r.Q, P)) <= 1e-9);
      CHECK(r.energies.back() < r.energies.front());
      for (std::size_t k = 1; k < r.energies.size(); ++k) CHECK(r.energies[k] <= r.energies[k - 1] + 1e-14);
      const ScalarField t = tr_q2(r.Q);
      for (std::size_t k = 0; k < t.size(); ++k) CHECK(t[k] == doctest::Approx(1.0).epsilon(1e-7));
    }
    SUBCASE("positive a drives Q to zero") {
      P.a = 1.0;
      const auto r = en::relax_to_equilibrium(test::trig_q(g, 40, 3, 0.5), P, 1e-10, 200000);
      CHECK(r.converged);
      CHECK(test::max_abs(r.Q) <= 1e-9);
    }
  }
}
