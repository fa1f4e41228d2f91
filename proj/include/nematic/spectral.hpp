#pragma once

// Fourier-space kernels on the periodic unit square.
//
// Convention: f(x) = sum_k c(k) exp(2 pi i k.x) with integer wavevectors k; the
// physical factor 2 pi enters only through the symbols (d/dx_j -> 2 pi i k_j).
// Coefficients are normalized (forward divides by n^2). Real fields store the
// half spectrum k2 >= 0 (n rows by n/2+1 columns); Hermitian symmetry
// c(-k) = conj(c(k)) supplies the rest.

#include <complex>
#include <span>
#include <vector>

#include "nematic/fields.hpp"

namespace nematic::spectral {

class SpectralField {
 public:
  explicit SpectralField(Grid grid);

  const Grid& grid() const noexcept { return grid_; }
  int rows() const noexcept { return grid_.n(); }
  int cols() const noexcept { return grid_.n() / 2 + 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  // Storage access: row r holds k1 = wavenumber(r), column c holds k2 = c.
  std::complex<double>& operator()(int r, int c) noexcept { return coeffs_[index(r, c)]; }
  std::complex<double> operator()(int r, int c) const noexcept { return coeffs_[index(r, c)]; }

  // Coefficient of any wavevector with |k1|, |k2| < n/2.
  std::complex<double> coefficient(int k1, int k2) const;
  void set_coefficient(int k1, int k2, std::complex<double> value);

  std::span<std::complex<double>> span() noexcept { return coeffs_; }
  std::span<const std::complex<double>> span() const noexcept { return coeffs_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  // this += s * o
  SpectralField& add_scaled(double s, const SpectralField& o);

  // Storage index to signed wavenumber in (-n/2, n/2].
  static int wavenumber(int index, int n) noexcept { return index <= n / 2 ? index : index - n; }
  // Multiplicity of a stored column in the full spectrum (2 for interior columns).
  double column_weight(int c) const noexcept {
    return (c == 0 || c == grid_.n() / 2) ? 1.0 : 2.0;
  }

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * (grid_.n() / 2 + 1) + c;
  }
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

SpectralField forward(const ScalarField& f);
ScalarField inverse(const SpectralField& f);

// Multiplies by (2 pi i k_axis)^order, axis in {1, 2}, order in {1, 2}. For odd
// order the Nyquist wavenumber is treated as zero (its derivative is not real).
SpectralField derivative(const SpectralField& f, int axis, int order);
SpectralField laplacian(const SpectralField& f);

// 2/3 rule: zeroes every mode with max(|k1|, |k2|) > n/3.
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);
// forward -> dealias -> inverse.
ScalarField dealiased(const ScalarField& f);

// Solves (I - alpha Laplacian) g = f, alpha > 0.
SpectralField invert_helmholtz(const SpectralField& f, double alpha);

// Leray projection onto divergence-free, zero-mean fields.
VelocityField leray_project(const VelocityField& u);
void leray_project_inplace(SpectralField& u1, SpectralField& u2);

// max over wavevectors of |k.u(k)| with integer k.
double max_divergence(const SpectralField& u1, const SpectralField& u2);
double max_divergence(const VelocityField& u);

// Parseval quadratures.
double l2_squared(const SpectralField& f);
double inner(const SpectralField& f, const SpectralField& g);
// int |grad f|^2 dx
double gradient_l2_squared(const SpectralField& f);
// int |Laplacian f|^2 dx
double laplacian_l2_squared(const SpectralField& f);
// sum_k (1 + 4 pi^2 |k|^2)^s |c(k)|^2, the squared H^s norm used throughout.
double sobolev_squared(const SpectralField& f, int s);

// Pressure (zero mean) from -Laplacian P = div(g) for a given vector field g.
ScalarField pressure_from_divergence(const VelocityField& g);

}  // namespace nematic::spectral
