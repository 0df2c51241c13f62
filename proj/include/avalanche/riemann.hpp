#pragma once

#include "avalanche/physics.hpp"
#include "avalanche/types.hpp"

namespace avalanche {

/// Left/right traces of a local Riemann problem across an edge with unit
/// normal n pointing from left to right. Each side carries its own beta.
struct RiemannStates {
  State left;
  State right;
  BetaPair beta_left;
  BetaPair beta_right;
  Vec2 n{1.0, 0.0};
  double h_dry = 1e-6;
};

struct StarEstimate {
  double u_star = 0.0;
  double h_star = 0.0;
};

struct WaveSpeeds {
  double left = 0.0;
  double right = 0.0;
};

/// Directional gravity coefficient bx nx^2 + by ny^2.
double gravity_coeff(const BetaPair& b, Vec2 n);

/// Two-rarefaction style middle-state estimate. Requires both sides wet;
/// the h_star divisor is the mean of the two directional coefficients.
StarEstimate star_estimates(const RiemannStates& s);

/// Signal speed estimates including the dry-bed cases. At least one side
/// must be wet.
WaveSpeeds wave_speeds(const RiemannStates& s);

/// HLL numerical flux along n. Exactly zero when both sides are dry.
/// Throws SolverError on a non-finite result.
State hll_flux(const RiemannStates& s);

}  // namespace avalanche
