#include "avalanche/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace avalanche {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

InclinationSample chute_zeta(const ChuteInclination& chute, double x) {
  if (x <= chute.x_incline_end) return {chute.zeta0, 0.0};
  if (x >= chute.x_horizontal_start) return {0.0, 0.0};
  const double width = chute.x_horizontal_start - chute.x_incline_end;
  return {chute.zeta0 * (1.0 - (x - chute.x_incline_end) / width), -chute.zeta0 / width};
}

TopographySample cone_zb(const ConeTopography& cone, Vec2 p) {
  const Vec2 d = p - cone.center;
  const double r = norm(d);
  if (r >= cone.radius) return {};
  const double zb = cone.height * (1.0 - r / cone.radius);
  if (r == 0.0) return {zb, {}};
  const double slope = -cone.height / cone.radius;
  return {zb, Vec2{slope * d.x / r, slope * d.y / r}};
}

double cap_initial(const CapInitial& cap, Vec2 p) {
  const Vec2 d = p - cap.center;
  return std::sqrt(std::max(0.0, cap.r0 * cap.r0 - dot(d, d)));
}

State dam_initial(const DamBreakInitial& dam, Vec2 p) {
  if (p.x < 0.0) return {dam.h0, 0.0, 0.0};
  return {};
}

DepthVelocity exact_dambreak(const DamBreakExact& s, double x, double t) {
  const double cos_z = std::cos(s.zeta);
  // Net deceleration g cos(zeta) (tan(delta) - tan(zeta)) of the reduced model.
  const double decel = s.g * cos_z * (std::tan(s.delta) - std::tan(s.zeta));
  const double c0 = std::sqrt(s.g * s.h0 * cos_z);
  const double chi = x + 0.5 * decel * t * t;

  if (t <= 0.0) return x < 0.0 ? DepthVelocity{s.h0, 0.0} : DepthVelocity{};
  if (chi < -c0 * t) return {s.h0, -decel * t};
  if (chi > 2.0 * c0 * t) return {};
  const double r = 2.0 - chi / (c0 * t);
  const double big_u = (2.0 / 3.0) * (chi / t + c0);
  return {s.h0 / 9.0 * r * r, big_u - decel * t};
}

State ghost_state(BoundaryRule rule, const State& interior, Vec2 n) {
  if (rule == BoundaryRule::Outflow) return interior;
  const double mn = interior.hu * n.x + interior.hv * n.y;
  return {interior.h, interior.hu - 2.0 * mn * n.x, interior.hv - 2.0 * mn * n.y};
}

InclinationSample ScenarioSpec::inclination_at(double px) const {
  if (const auto* c = std::get_if<ChuteInclination>(&inclination)) return chute_zeta(*c, px);
  return {std::get<ConstantInclination>(inclination).zeta, 0.0};
}

TopographySample ScenarioSpec::topography_at(Vec2 p) const {
  if (const auto* c = std::get_if<ConeTopography>(&topography)) return cone_zb(*c, p);
  return {};
}

State ScenarioSpec::initial_state(Vec2 p) const {
  return std::visit(
      [&](const auto& ic) -> State {
        using T = std::decay_t<decltype(ic)>;
        if constexpr (std::is_same_v<T, DamBreakInitial>) {
          return dam_initial(ic, p);
        } else if constexpr (std::is_same_v<T, CapInitial>) {
          return {cap_initial(ic, p), 0.0, 0.0};
        } else {
          return ic.state;
        }
      },
      initial);
}

void ScenarioSpec::validate() const {
  params.validate();
  if (!(x.hi > x.lo) || !(y.hi > y.lo)) throw ConfigError("degenerate domain");
  if (const auto* c = std::get_if<ChuteInclination>(&inclination)) {
    if (!(c->x_incline_end < c->x_horizontal_start)) {
      throw ConfigError("chute breakpoints must be ordered");
    }
  }
  if (const auto* c = std::get_if<ConeTopography>(&topography)) {
    if (!(c->radius > 0.0) || !(c->height > 0.0)) throw ConfigError("cone needs R, H > 0");
  }
  if (const auto* d = std::get_if<DamBreakInitial>(&initial); d && !(d->h0 > 0.0)) {
    throw ConfigError("dam break needs h0 > 0");
  }
  if (const auto* c = std::get_if<CapInitial>(&initial); c && !(c->r0 > 0.0)) {
    throw ConfigError("cap needs r0 > 0");
  }
  if (const auto* u = std::get_if<UniformInitial>(&initial); u && !(u->state.h >= 0.0)) {
    throw ConfigError("uniform depth must be non-negative");
  }
}

ScenarioSpec dam_break_scenario() {
  ScenarioSpec s;
  s.name = "dam_break";
  s.x = {-12.8, 12.8};
  s.y = {-1.6, 1.6};
  s.inclination = ConstantInclination{deg_to_rad(40.0)};
  s.topography = FlatTopography{};
  s.initial = DamBreakInitial{10.0};
  s.boundaries = {BoundaryRule::Outflow, BoundaryRule::Wall};
  s.params.delta = deg_to_rad(24.5);
  s.params.phi = s.params.delta;
  s.params.gravity = 9.81;
  s.params.pressure = PressureMode::Constant;
  s.params.constant_k = 1.0;
  return s;
}

ScenarioSpec chute_scenario() {
  ScenarioSpec s;
  s.name = "chute";
  s.x = {0.0, 30.0};
  s.y = {-7.0, 7.0};
  s.inclination = ChuteInclination{deg_to_rad(35.0), 17.5, 21.5};
  s.topography = FlatTopography{};
  s.initial = CapInitial{{4.0, 0.0}, 1.85};
  s.boundaries = {BoundaryRule::Outflow, BoundaryRule::Outflow};
  s.params.phi = deg_to_rad(30.0);
  s.params.delta = deg_to_rad(30.0);
  s.params.pressure = PressureMode::MohrCoulomb;
  return s;
}

ScenarioSpec obstacle_scenario() {
  ScenarioSpec s = chute_scenario();
  s.name = "obstacle";
  s.topography = ConeTopography{{13.0, 0.0}, 1.0, 1.0};
  return s;
}

ScenarioSpec rest_scenario(double depth) {
  ScenarioSpec s;
  s.name = "rest";
  s.x = {-1.0, 1.0};
  s.y = {-1.0, 1.0};
  s.inclination = ConstantInclination{0.0};
  s.topography = FlatTopography{};
  s.initial = UniformInitial{{depth, 0.0, 0.0}};
  s.boundaries = {BoundaryRule::Wall, BoundaryRule::Wall};
  s.params.phi = deg_to_rad(30.0);
  s.params.delta = deg_to_rad(30.0);
  return s;
}

DamBreakExact dam_break_exact(const ScenarioSpec& spec) {
  const auto* dam = std::get_if<DamBreakInitial>(&spec.initial);
  const auto* incl = std::get_if<ConstantInclination>(&spec.inclination);
  if (!dam || !incl || !std::holds_alternative<FlatTopography>(spec.topography)) {
    throw ConfigError("scenario '" + spec.name + "' has no exact solution");
  }
  return {dam->h0, incl->zeta, spec.params.delta, spec.params.gravity};
}

}  // namespace avalanche
