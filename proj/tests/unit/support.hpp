#pragma once

// Small helpers shared by the unit tests. Inputs are built from explicit
// trigonometric sums so that they never depend on the transforms under test.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "nematic/fields.hpp"

namespace test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline nematic::ScalarField sample(const nematic::Grid& g, const std::function<double(double, double)>& f) {
  nematic::ScalarField out(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) out(i, j) = f(g.coordinate(i), g.coordinate(j));
  return out;
}

// Random real trigonometric polynomial with max(|k1|, |k2|) <= band.
inline nematic::ScalarField trig_field(const nematic::Grid& g, std::uint64_t seed, int band, bool with_mean = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Term {
    int k1, k2;
    double a, b;
  };
  std::vector<Term> terms;
  for (int k1 = -band; k1 <= band; ++k1)
    for (int k2 = 0; k2 <= band; ++k2) {
      if (k2 == 0 && k1 < 0) continue;
      if (k1 == 0 && k2 == 0 && !with_mean) continue;
      terms.push_back({k1, k2, U(rng), (k1 == 0 && k2 == 0) ? 0.0 : U(rng)});
    }
  return sample(g, [&](double x1, double x2) {
    double s = 0.0;
    for (const Term& t : terms) {
      const double ph = kTwoPi * (t.k1 * x1 + t.k2 * x2);
      s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s;
  });
}

// Divergence-free field (d2 psi, -d1 psi) from an explicit random stream function.
inline nematic::VelocityField trig_velocity(const nematic::Grid& g, std::uint64_t seed, int band) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Term {
    int k1, k2;
    double a, b;
  };
  std::vector<Term> terms;
  for (int k1 = -band; k1 <= band; ++k1)
    for (int k2 = 0; k2 <= band; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      terms.push_back({k1, k2, U(rng), U(rng)});
    }
  // psi = sum a cos(ph) + b sin(ph); d_l psi = 2 pi k_l (-a sin + b cos)
  auto dpsi = [&](double x1, double x2, int l) {
    double s = 0.0;
    for (const Term& t : terms) {
      const double ph = kTwoPi * (t.k1 * x1 + t.k2 * x2);
      s += kTwoPi * (l == 1 ? t.k1 : t.k2) * (-t.a * std::sin(ph) + t.b * std::cos(ph));
    }
    return s;
  };
  return nematic::VelocityField(sample(g, [&](double x1, double x2) { return dpsi(x1, x2, 2); }),
                                sample(g, [&](double x1, double x2) { return -dpsi(x1, x2, 1); }));
}

inline nematic::QTensorField trig_q(const nematic::Grid& g, std::uint64_t seed, int band, double scale = 0.3,
                                    double p0 = 0.0) {
  nematic::QTensorField Q(trig_field(g, seed, band), trig_field(g, seed + 1000, band));
  Q *= scale;
  for (std::size_t k = 0; k < Q.p.size(); ++k) Q.p[k] += p0;
  return Q;
}

inline double max_diff(const nematic::ScalarField& a, const nematic::ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}
inline double max_diff(const nematic::QTensorField& a, const nematic::QTensorField& b) {
  return std::max(max_diff(a.p, b.p), max_diff(a.q, b.q));
}
inline double max_diff(const nematic::VelocityField& a, const nematic::VelocityField& b) {
  return std::max(max_diff(a.u1, b.u1), max_diff(a.u2, b.u2));
}
inline double max_abs(const nematic::QTensorField& a) { return std::max(a.p.max_abs(), a.q.max_abs()); }
inline double max_abs(const nematic::VelocityField& a) { return std::max(a.u1.max_abs(), a.u2.max_abs()); }

}  // namespace test
