#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "nematic/fields.hpp"
#include "support.hpp"

using namespace nematic;

TEST_SUITE("fields") {
  TEST_CASE("grid accepts even n >= 8 only") {
    CHECK_NOTHROW(Grid(8));
    CHECK_NOTHROW(Grid(10));
    CHECK_THROWS_AS(Grid(7), std::invalid_argument);
    CHECK_THROWS_AS(Grid(6), std::invalid_argument);
    const Grid g(16);
    CHECK(g.size() == 256);
    CHECK(g.dx() == doctest::Approx(1.0 / 16));
    CHECK(g.index(2, 3) == 2 * 16 + 3);
    CHECK(g.dealias_cutoff() == 5);
    CHECK_THROWS_AS(require_same_grid(Grid(8), Grid(10), "x"), std::invalid_argument);
  }

  TEST_CASE("q_to_matrix builds the symmetric traceless matrix") {
    const Grid g(8);
    QTensorField Q(g);
    Q.p(0, 0) = 1.0;
    Q.q(1, 0) = 1.0;
    Q.p(2, 0) = 0.3;
    Q.q(2, 0) = -0.7;
    const Mat2 a = q_to_matrix(Q, 0, 0);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 1) == -1.0);
    CHECK(a(0, 1) == 0.0);
    const Mat2 b = q_to_matrix(Q, 1, 0);
    CHECK(b(0, 1) == 1.0);
    CHECK(b(1, 0) == 1.0);
    CHECK(b(0, 0) == 0.0);
    const Mat2 z = q_to_matrix(Q, 3, 3);
    CHECK(frobenius(z, z) == 0.0);
    const Mat2 c = q_to_matrix(Q, 2, 0);
    CHECK(c.trace() == 0.0);
    CHECK(c(0, 1) == c(1, 0));
    CHECK_THROWS_AS(q_to_matrix(Q, 8, 0), std::out_of_range);
    CHECK_THROWS_AS(q_to_matrix(Q, 0, -1), std::out_of_range);
  }

  TEST_CASE("tr_q2 matches the matrix trace") {
    const Grid g(8);
    QTensorField Q(g);
    Q.p(0, 0) = 0.5;
    Q.q(0, 0) = 0.5;
    const ScalarField t = tr_q2(Q);
    CHECK(t(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t(1, 1) == 0.0);

    const Grid h(10);
    const QTensorField R = test::trig_q(h, 3, 2, 1.0, 0.2);
    const ScalarField tr = tr_q2(R);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const Mat2 m = q_to_matrix(R, i, j);
        CHECK(std::abs(tr(i, j) - (m * m).trace()) <= 1e-14);
      }
  }

  TEST_CASE("director decomposition") {
    const Grid g(8);
    QTensorField Q(g);
    Q.p(1, 0) = 0.5;
    Q.q(2, 0) = 0.5;
    Q.p(3, 0) = -0.5;
    const DirectorField d = director_decompose(Q);
    CHECK(d.s(0, 0) == 0.0);
    CHECK(d.theta(0, 0) == 0.0);
    CHECK(d.s(1, 0) == doctest::Approx(1.0));
    CHECK(d.theta(1, 0) == doctest::Approx(0.0));
    CHECK(d.s(2, 0) == doctest::Approx(1.0));
    CHECK(d.theta(2, 0) == doctest::Approx(std::numbers::pi / 4));
    CHECK(d.theta(3, 0) == doctest::Approx(std::numbers::pi / 2));
  }

  TEST_CASE("director reconstruction and angle range") {
    const Grid g(16);
    const QTensorField Q = test::trig_q(g, 11, 3, 1.0);
    const DirectorField d = director_decompose(Q);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double s = d.s[k];
      const double th = d.theta[k];
      CHECK(th > -std::numbers::pi / 2);
      CHECK(th <= std::numbers::pi / 2);
      // s (n n^T - I/2) = s/2 [[cos 2th, sin 2th], [sin 2th, -cos 2th]]
      CHECK(std::abs(0.5 * s * std::cos(2 * th) - Q.p[k]) <= 1e-12);
      CHECK(std::abs(0.5 * s * std::sin(2 * th) - Q.q[k]) <= 1e-12);
    }
  }

  TEST_CASE("field arithmetic and quadrature") {
    const Grid g(8);
    ScalarField a(g, 2.0);
    CHECK(a.integral() == doctest::Approx(2.0));
    ScalarField b = test::sample(g, [](double x1, double) { return std::sin(test::kTwoPi * x1); });
    CHECK(std::abs(b.integral()) <= 1e-15);
    CHECK(integral_of_product(b, b) == doctest::Approx(0.5));
    QTensorField Q(ScalarField(g, 1.0), ScalarField(g, 1.0));
    CHECK(inner(Q, Q) == doctest::Approx(4.0));
    CHECK(Q.max_norm() == doctest::Approx(2.0));
    a.data()[3] = std::nan("");
    CHECK_FALSE(a.all_finite());
    CHECK_THROWS_AS(a += ScalarField(Grid(10)), std::invalid_argument);
  }

  TEST_CASE("parameter validation") {
    Parameters p;
    CHECK(p.validate().empty());
    p.c = -1.0;
    CHECK_FALSE(p.validate().empty());
    p = Parameters{};
    p.nu = 0.0;
    CHECK_FALSE(p.validate().empty());
    p = Parameters{};
    p.a = 2.0;
    p.xi = -3.0;
    CHECK(p.validate().empty());
  }
}
