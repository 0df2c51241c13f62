#pragma once

#include <string>
#include <variant>

#include "avalanche/mesh.hpp"
#include "avalanche/physics.hpp"
#include "avalanche/types.hpp"

namespace avalanche {

double deg_to_rad(double deg);

struct ConstantInclination {
  double zeta = 0.0;
};

/// Inclined plane, linear transition, horizontal run-out.
struct ChuteInclination {
  double zeta0 = 0.0;
  double x_incline_end = 17.5;
  double x_horizontal_start = 21.5;
};

using Inclination = std::variant<ConstantInclination, ChuteInclination>;

struct FlatTopography {};

struct ConeTopography {
  Vec2 center{13.0, 0.0};
  double radius = 1.0;
  double height = 1.0;
};

using Topography = std::variant<FlatTopography, ConeTopography>;

struct DamBreakInitial {
  double h0 = 10.0;
};

struct CapInitial {
  Vec2 center{4.0, 0.0};
  double r0 = 1.85;
};

struct UniformInitial {
  State state;
};

using InitialCondition = std::variant<DamBreakInitial, CapInitial, UniformInitial>;

enum class BoundaryRule { Outflow, Wall };

/// Boundary edges whose outward normal is mostly along x use `x`, the rest
/// use `y`.
struct Boundaries {
  BoundaryRule x = BoundaryRule::Outflow;
  BoundaryRule y = BoundaryRule::Outflow;

  BoundaryRule rule_for(Vec2 n) const { return std::abs(n.x) >= std::abs(n.y) ? x : y; }
};

struct InclinationSample {
  double zeta = 0.0;
  double dzeta_dx = 0.0;
};

struct TopographySample {
  double zb = 0.0;
  Vec2 grad;
};

struct ScenarioSpec {
  std::string name;
  Range x;
  Range y;
  Inclination inclination;
  Topography topography;
  InitialCondition initial;
  Boundaries boundaries;
  MaterialParams params;

  InclinationSample inclination_at(double x) const;
  TopographySample topography_at(Vec2 p) const;
  State initial_state(Vec2 p) const;

  /// Throws ConfigError on inadmissible geometry or parameters.
  void validate() const;
};

InclinationSample chute_zeta(const ChuteInclination& chute, double x);

/// Linear cone z_b = H max(0, 1 - r/R); zero gradient at the apex and
/// outside the rim.
TopographySample cone_zb(const ConeTopography& cone, Vec2 p);

/// Spherical cap depth sqrt(max(0, r0^2 - r^2)).
double cap_initial(const CapInitial& cap, Vec2 p);

/// Dry for x >= 0.
State dam_initial(const DamBreakInitial& dam, Vec2 p);

struct DamBreakExact {
  double h0 = 10.0;
  double zeta = 0.0;
  double delta = 0.0;
  double g = 9.81;
};

struct DepthVelocity {
  double h = 0.0;
  double u = 0.0;
};

/// Similarity solution of the 1D granular dam break on a constant slope
/// with Coulomb friction.
DepthVelocity exact_dambreak(const DamBreakExact& setup, double x, double t);

/// Exterior state for a boundary edge with outward normal n.
State ghost_state(BoundaryRule rule, const State& interior, Vec2 n);

/// Setups of the three verification experiments plus a resting layer.
ScenarioSpec dam_break_scenario();
ScenarioSpec chute_scenario();
ScenarioSpec obstacle_scenario();
ScenarioSpec rest_scenario(double depth = 1.0);

/// Builds the exact-solution setup for a dam-break scenario. Throws
/// ConfigError for other scenarios.
DamBreakExact dam_break_exact(const ScenarioSpec& spec);

}  // namespace avalanche
