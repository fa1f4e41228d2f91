#include "nematic/initial_conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nematic/spectral.hpp"

namespace nematic::initial {

namespace sp = nematic::spectral;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

sp::SpectralField random_spectrum(const Grid& grid, std::uint64_t seed, double decay, int band,
                                  bool with_mean) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int kmax = std::min(band, grid.n() / 2 - 1);
  sp::SpectralField f(grid);
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = 0; k2 <= kmax; ++k2) {
      if (k2 == 0 && k1 < 0) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      if (k1 == 0 && k2 == 0) {
        if (with_mean) f.set_coefficient(0, 0, re);
        continue;
      }
      const double mag = std::pow(std::hypot(k1, k2), -decay);
      f.set_coefficient(k1, k2, mag * std::complex<double>(re, im));
    }
  }
  return f;
}

}  // namespace

VelocityField taylor_green(const Grid& grid, double amplitude) {
  VelocityField u(grid);
  for (int i = 0; i < grid.n(); ++i) {
    const double x1 = kTwoPi * grid.coordinate(i);
    for (int j = 0; j < grid.n(); ++j) {
      const double x2 = kTwoPi * grid.coordinate(j);
      u.u1(i, j) = amplitude * std::sin(x1) * std::cos(x2);
      u.u2(i, j) = -amplitude * std::cos(x1) * std::sin(x2);
    }
  }
  return u;
}

ScalarField random_smooth_scalar(const Grid& grid, std::uint64_t seed, double decay, int band,
                                 bool with_mean) {
  return sp::inverse(random_spectrum(grid, seed, decay, band, with_mean));
}

VelocityField random_smooth_velocity(const Grid& grid, std::uint64_t seed, double amplitude, double decay,
                                     int band) {
  const sp::SpectralField psi = random_spectrum(grid, seed, decay, band, false);
  VelocityField u(sp::inverse(sp::derivative(psi, 2, 1)), sp::inverse(sp::derivative(psi, 1, 1)));
  u.u2 *= -1.0;
  const double norm = u.l2_norm();
  if (norm > 0.0) u *= amplitude / norm;
  return u;
}

QTensorField random_q(const Grid& grid, std::uint64_t seed, double amplitude, double decay, int band) {
  std::mt19937_64 seeds(seed);
  const std::uint64_t sp_seed = seeds();
  const std::uint64_t sq_seed = seeds();
  QTensorField Q(random_smooth_scalar(grid, sp_seed, decay, band, true),
                 random_smooth_scalar(grid, sq_seed, decay, band, true));
  const double norm = Q.max_norm();
  if (norm > 0.0) Q *= amplitude / norm;
  return Q;
}

QTensorField constant_q(const Grid& grid, double p, double q) {
  return QTensorField(ScalarField(grid, p), ScalarField(grid, q));
}

QTensorField uniform_equilibrium(const Grid& grid, const Parameters& params, double angle) {
  if (params.a >= 0.0) return QTensorField(grid);
  const double r = std::sqrt(-params.a / (2.0 * params.c));
  return constant_q(grid, r * std::cos(2.0 * angle), r * std::sin(2.0 * angle));
}

QTensorField perturbed_equilibrium(const Grid& grid, const Parameters& params, double angle,
                                   std::uint64_t seed, double amplitude, double decay, int band) {
  QTensorField Q = uniform_equilibrium(grid, params, angle);
  Q += random_q(grid, seed, amplitude, decay, band);
  return Q;
}

SimState make_initial_state(const RunConfig& config) {
  const Grid grid(config.grid_n);
  const InitialCondition& ic = config.initial;
  VelocityField u(grid);
  switch (ic.velocity) {
    case VelocityInit::taylor_green:
      u = taylor_green(grid, ic.velocity_amplitude);
      break;
    case VelocityInit::random_smooth:
      u = random_smooth_velocity(grid, ic.velocity_seed, ic.velocity_amplitude, ic.spectrum_decay,
                                 ic.velocity_band);
      break;
    case VelocityInit::quiescent:
      break;
  }
  QTensorField Q(grid);
  switch (ic.q) {
    case QInit::random_q:
      Q = random_q(grid, ic.q_seed, ic.q_amplitude, ic.spectrum_decay, ic.q_band);
      break;
    case QInit::constant_q:
      Q = constant_q(grid, ic.q_p, ic.q_q);
      break;
    case QInit::perturbed_equilibrium:
      Q = perturbed_equilibrium(grid, config.params, ic.q_angle, ic.q_seed, ic.q_amplitude,
                                ic.spectrum_decay, ic.q_band);
      break;
  }
  return SimState(0.0, std::move(u), std::move(Q));
}

}  // namespace nematic::initial
