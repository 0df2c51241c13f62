#pragma once

#include <array>

#include "avalanche/types.hpp"

namespace avalanche {

struct PrimitiveState {
  double h = 0.0;
  double u = 0.0;
  double v = 0.0;
};

enum class PressureMode { MohrCoulomb, Constant };

struct MaterialParams {
  double phi = 0.0;      // internal friction angle [rad]
  double delta = 0.0;    // basal friction angle [rad]
  double epsilon = 1.0;  // aspect ratio
  double lambda = 1.0;   // curvature stretch
  double gravity = 1.0;  // scales both beta and the source
  double h_dry = 1e-6;
  double u_reg = 1e-8;
  double h_thin = 1e-3;  // thinner cells: regularized momentum, first-order traces
  PressureMode pressure = PressureMode::MohrCoulomb;
  double constant_k = 1.0;  // used when pressure == Constant

  /// Throws ConfigError on inadmissible values.
  void validate() const;
};

struct EarthPressure {
  double kx = 1.0;
  double ky = 1.0;
};

struct BetaPair {
  double bx = 1.0;
  double by = 1.0;
};

struct SourceTerms {
  double sx = 0.0;
  double sy = 0.0;
};

/// Velocities are zero below the dry threshold.
PrimitiveState primitive_from_conserved(const State& U, double h_dry);

/// Mohr-Coulomb earth pressure coefficients. A non-negative velocity
/// gradient selects the active branch. In Constant mode both coefficients
/// equal params.constant_k and the gradients are ignored.
EarthPressure earth_pressure(const MaterialParams& params, double dudx, double dvdy);

/// beta = gravity * epsilon * cos(zeta) * K. Throws HyperbolicityError if
/// either factor is not strictly positive.
BetaPair beta(const MaterialParams& params, double zeta, const EarthPressure& k);

/// F(U) n_x + G(U) n_y. Velocities come from primitive_from_conserved, so a
/// state below h_dry carries only its hydrostatic term.
State flux_normal(const State& U, const BetaPair& b, Vec2 n, double h_dry = 0.0);

/// Eigenvalues of the normal flux Jacobian in ascending order.
std::array<double, 3> eigenvalues(const State& U, const BetaPair& b, Vec2 n, double h_dry = 0.0);

/// Net driving accelerations (s_x, s_y), scaled by params.gravity. The
/// Coulomb friction direction is dropped when |u| < params.u_reg.
SourceTerms source(const PrimitiveState& prim, double zeta, double dzeta_dx, Vec2 grad_zb,
                   const MaterialParams& params);

/// cos(theta) F(U) + sin(theta) G(U) - T^{-1} F(T U) for the rotation T by
/// theta. Vanishes identically iff bx == by; otherwise only the third
/// component survives, as (by - bx) h^2 sin(theta) / 2.
State rotation_defect(const State& U, const BetaPair& b, double theta);

}  // namespace avalanche
