#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nematic/grid.hpp"

namespace nematic {

// Real scalar field on a Grid, row-major.
class ScalarField {
 public:
  explicit ScalarField(Grid grid, double fill = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  double max_abs() const noexcept;
  // Rectangle rule on the torus: sum * dx^2.
  double integral() const noexcept;
  bool all_finite() const noexcept;

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
// Rectangle-rule integral of a*b.
double integral_of_product(const ScalarField& a, const ScalarField& b);

// 2x2 real matrix for pointwise tensor algebra.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};

  double& operator()(int i, int j) noexcept { return m[i][j]; }
  double operator()(int i, int j) const noexcept { return m[i][j]; }

  static Mat2 identity() noexcept { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }
  Mat2 transpose() const noexcept { return Mat2{{{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}}; }
  double trace() const noexcept { return m[0][0] + m[1][1]; }
};

Mat2 operator+(const Mat2& a, const Mat2& b) noexcept;
Mat2 operator-(const Mat2& a, const Mat2& b) noexcept;
Mat2 operator*(const Mat2& a, const Mat2& b) noexcept;
Mat2 operator*(double s, const Mat2& a) noexcept;
// Frobenius product A:B = sum_ij A_ij B_ij.
double frobenius(const Mat2& a, const Mat2& b) noexcept;

// Symmetric traceless order parameter Q = [[p, q], [q, -p]] stored as (p, q).
// Symmetry and zero trace hold by construction.
struct QTensorField {
  ScalarField p;
  ScalarField q;

  explicit QTensorField(Grid grid) : p(grid), q(grid) {}
  QTensorField(ScalarField p_, ScalarField q_);

  const Grid& grid() const noexcept { return p.grid(); }
  QTensorField& operator+=(const QTensorField& o);
  QTensorField& operator-=(const QTensorField& o);
  QTensorField& operator*=(double s);
  // Pointwise Frobenius max norm sqrt(tr Q^2) = sqrt(2(p^2+q^2)).
  double max_norm() const noexcept;
  bool operator==(const QTensorField&) const = default;
};

// Frobenius L2 inner product of Q-tensor fields: int A:B dx = 2 int (a_p b_p + a_q b_q) dx.
double inner(const QTensorField& a, const QTensorField& b);

struct VelocityField {
  ScalarField u1;
  ScalarField u2;

  explicit VelocityField(Grid grid) : u1(grid), u2(grid) {}
  VelocityField(ScalarField a, ScalarField b);

  const Grid& grid() const noexcept { return u1.grid(); }
  VelocityField& operator+=(const VelocityField& o);
  VelocityField& operator-=(const VelocityField& o);
  VelocityField& operator*=(double s);
  // max over points of |u|.
  double max_norm() const noexcept;
  double l2_norm() const;
  bool operator==(const VelocityField&) const = default;
};

double inner(const VelocityField& a, const VelocityField& b);

// General (not necessarily symmetric) 2x2 tensor field; t[i][j] holds component ij.
struct Tensor2Field {
  std::array<std::array<ScalarField, 2>, 2> t;

  explicit Tensor2Field(Grid grid)
      : t{{{ScalarField(grid), ScalarField(grid)}, {ScalarField(grid), ScalarField(grid)}}} {}

  const Grid& grid() const noexcept { return t[0][0].grid(); }
  ScalarField& operator()(int i, int j) noexcept { return t[i][j]; }
  const ScalarField& operator()(int i, int j) const noexcept { return t[i][j]; }
  Mat2 at(std::size_t k) const noexcept;
};

// Physical constants. The cubic Landau-de Gennes coefficient b has no field: in 2D
// tr(Q^3) = 0 and Q^2 - tr(Q^2) I / 2 = 0 for every symmetric traceless Q, so every
// b-term vanishes identically.
struct Parameters {
  double nu = 1.0;      // viscosity
  double lambda = 1.0;  // kinetic / elastic coupling
  double gamma = 1.0;   // relaxation rate
  double L = 0.1;       // elastic constant
  double a = -1.0;      // bulk coefficient, any sign
  double c = 1.0;       // quartic bulk coefficient, must be positive
  double xi = 0.5;      // tumbling / aligning ratio, any sign

  // Test hook: flips the sign of the symmetric stress so that verification can
  // demonstrate it detects a broken coupling. Never set in production runs.
  bool corrupt_tau_sign = false;

  // Empty when every invariant holds.
  std::vector<std::string> validate() const;
};

struct SimState {
  double t = 0.0;
  VelocityField u;
  QTensorField Q;

  explicit SimState(Grid grid) : u(grid), Q(grid) {}
  SimState(double t_, VelocityField u_, QTensorField Q_);
  const Grid& grid() const noexcept { return u.grid(); }
  bool operator==(const SimState&) const = default;
};

// [[p, q], [q, -p]] at grid point (i, j). Throws std::out_of_range for bad indices.
Mat2 q_to_matrix(const QTensorField& Q, int i, int j);
Mat2 q_matrix(double p, double q) noexcept;

// Pointwise tr(Q^2) = 2(p^2 + q^2).
ScalarField tr_q2(const QTensorField& Q);

struct DirectorField {
  ScalarField s;      // scalar order parameter, s = 2 sqrt(p^2 + q^2)
  ScalarField theta;  // director angle in (-pi/2, pi/2]
};

// Inverts Q = s (n n^T - I/2), n = (cos theta, sin theta). Where s falls below
// kDirectorThreshold the angle is undefined and reported as 0.
inline constexpr double kDirectorThreshold = 1e-8;
DirectorField director_decompose(const QTensorField& Q);

}  // namespace nematic
