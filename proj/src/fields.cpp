#include "nematic/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nematic {

ScalarField::ScalarField(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField +=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "ScalarField -=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

double ScalarField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::integral() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.dx() * grid_.dx();
}

bool ScalarField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double integral_of_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "integral_of_product");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s * a.grid().dx() * a.grid().dx();
}

Mat2 operator+(const Mat2& a, const Mat2& b) noexcept {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) noexcept {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

Mat2 operator*(double s, const Mat2& a) noexcept {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = s * a(i, j);
  return r;
}

double frobenius(const Mat2& a, const Mat2& b) noexcept {
  return a(0, 0) * b(0, 0) + a(0, 1) * b(0, 1) + a(1, 0) * b(1, 0) + a(1, 1) * b(1, 1);
}

QTensorField::QTensorField(ScalarField p_, ScalarField q_) : p(std::move(p_)), q(std::move(q_)) {
  require_same_grid(p.grid(), q.grid(), "QTensorField");
}

QTensorField& QTensorField::operator+=(const QTensorField& o) {
  p += o.p;
  q += o.q;
  return *this;
}

QTensorField& QTensorField::operator-=(const QTensorField& o) {
  p -= o.p;
  q -= o.q;
  return *this;
}

QTensorField& QTensorField::operator*=(double s) {
  p *= s;
  q *= s;
  return *this;
}

double QTensorField::max_norm() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m = std::max(m, p[k] * p[k] + q[k] * q[k]);
  return std::sqrt(2.0 * m);
}

double inner(const QTensorField& a, const QTensorField& b) {
  return 2.0 * (integral_of_product(a.p, b.p) + integral_of_product(a.q, b.q));
}

VelocityField::VelocityField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
  require_same_grid(u1.grid(), u2.grid(), "VelocityField");
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
  u1 += o.u1;
  u2 += o.u2;
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
  u1 -= o.u1;
  u2 -= o.u2;
  return *this;
}

VelocityField& VelocityField::operator*=(double s) {
  u1 *= s;
  u2 *= s;
  return *this;
}

double VelocityField::max_norm() const noexcept {
  double m = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) m = std::max(m, u1[k] * u1[k] + u2[k] * u2[k]);
  return std::sqrt(m);
}

double VelocityField::l2_norm() const { return std::sqrt(inner(*this, *this)); }

double inner(const VelocityField& a, const VelocityField& b) {
  return integral_of_product(a.u1, b.u1) + integral_of_product(a.u2, b.u2);
}

Mat2 Tensor2Field::at(std::size_t k) const noexcept {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = t[i][j][k];
  return r;
}

std::vector<std::string> Parameters::validate() const {
  std::vector<std::string> errors;
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      errors.push_back(std::string(name) + " must be strictly positive (got " + std::to_string(v) + ")");
    }
  };
  positive(nu, "nu");
  positive(lambda, "lambda");
  positive(gamma, "gamma");
  positive(L, "L");
  if (!(c > 0.0) || !std::isfinite(c)) {
    errors.push_back("c must be strictly positive so that the bulk energy is bounded below (got " +
                     std::to_string(c) + ")");
  }
  if (!std::isfinite(a)) errors.push_back("a must be finite");
  if (!std::isfinite(xi)) errors.push_back("xi must be finite");
  return errors;
}

SimState::SimState(double t_, VelocityField u_, QTensorField Q_)
    : t(t_), u(std::move(u_)), Q(std::move(Q_)) {
  require_same_grid(u.grid(), Q.grid(), "SimState");
}

Mat2 q_matrix(double p, double q) noexcept { return Mat2{{{{p, q}, {q, -p}}}}; }

Mat2 q_to_matrix(const QTensorField& Q, int i, int j) {
  const int n = Q.grid().n();
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw std::out_of_range("q_to_matrix: index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside grid of size " + std::to_string(n));
  }
  return q_matrix(Q.p(i, j), Q.q(i, j));
}

ScalarField tr_q2(const QTensorField& Q) {
  ScalarField out(Q.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 2.0 * (Q.p[k] * Q.p[k] + Q.q[k] * Q.q[k]);
  return out;
}

DirectorField director_decompose(const QTensorField& Q) {
  DirectorField d{ScalarField(Q.grid()), ScalarField(Q.grid())};
  for (std::size_t k = 0; k < Q.p.size(); ++k) {
    const double s = 2.0 * std::hypot(Q.p[k], Q.q[k]);
    d.s[k] = s;
    d.theta[k] = s > kDirectorThreshold ? 0.5 * std::atan2(Q.q[k], Q.p[k]) : 0.0;
  }
  return d;
}

}  // namespace nematic
