#pragma once

#include <cstdint>

#include "nematic/config.hpp"
#include "nematic/fields.hpp"

namespace nematic::initial {

// u = amplitude (sin 2 pi x1 cos 2 pi x2, -cos 2 pi x1 sin 2 pi x2).
VelocityField taylor_green(const Grid& grid, double amplitude);

// Seeded random trigonometric polynomial with max(|k1|,|k2|) <= band (clipped
// below n/2) and |c(k)| ~ |k|^-decay; the mean is included when `with_mean`.
// Not normalized.
ScalarField random_smooth_scalar(const Grid& grid, std::uint64_t seed, double decay, int band,
                                 bool with_mean);

// Divergence-free u = (d2 psi, -d1 psi) from a random stream function, scaled to
// ||u||_L2 = amplitude.
VelocityField random_smooth_velocity(const Grid& grid, std::uint64_t seed, double amplitude, double decay,
                                     int band);

// Random smooth Q scaled so that max sqrt(tr Q^2) = amplitude.
QTensorField random_q(const Grid& grid, std::uint64_t seed, double amplitude, double decay, int band);

QTensorField constant_q(const Grid& grid, double p, double q);

// Uniform minimizer of the bulk energy: p^2 + q^2 = -a / (2c) with director angle
// `angle` when a < 0, and Q = 0 otherwise.
QTensorField uniform_equilibrium(const Grid& grid, const Parameters& params, double angle);

QTensorField perturbed_equilibrium(const Grid& grid, const Parameters& params, double angle,
                                   std::uint64_t seed, double amplitude, double decay, int band);

// Initial state from the config's initial-condition block (ignores initial_snapshot).
SimState make_initial_state(const RunConfig& config);

}  // namespace nematic::initial
