#pragma once

#include <cstdint>

#include "npns/grid.hpp"
#include "npns/rng.hpp"

namespace npns {

// Reproducible smooth random fields for verification sweeps and synthetic
// trajectories. All draws come from the counter stream at the given step.

// Zero-mean cosine series with random coefficients, scaled to `scale`.
ScalarField random_smooth_scalar(const Grid& g, const CounterRng& rng,
                                 uint64_t step, int max_mode, double scale);

// Strictly positive smooth field, exp of a random cosine series.
ScalarField random_positive_field(const Grid& g, const CounterRng& rng,
                                  uint64_t step, int max_mode, double scale);

// Discretely divergence-free no-slip velocity from a random corner stream
// function (zero on the walls).
VectorField random_solenoidal_velocity(const Grid& g, const CounterRng& rng,
                                       uint64_t step, int max_mode, double scale);

// Face gradient of a random smooth scalar under a homogeneous Neumann rule.
VectorField random_gradient_field(const Grid& g, const CounterRng& rng,
                                  uint64_t step, int max_mode, double scale);

}  // namespace npns
