#include "avalanche/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace avalanche {

void MaterialParams::validate() const {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (!(delta >= 0.0 && delta <= phi && phi < half_pi)) {
    throw ConfigError("friction angles must satisfy 0 <= delta <= phi < 90 deg");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(gravity > 0.0)) throw ConfigError("gravity must be positive");
  if (!(h_dry > 0.0)) throw ConfigError("h_dry must be positive");
  if (!(u_reg > 0.0)) throw ConfigError("u_reg must be positive");
  if (!(h_thin >= 0.0)) throw ConfigError("h_thin must be non-negative");
  if (pressure == PressureMode::Constant && !(constant_k > 0.0)) {
    throw ConfigError("constant earth pressure must be positive");
  }
}

PrimitiveState primitive_from_conserved(const State& U, double h_dry) {
  if (U.h >= h_dry && U.h > 0.0) return {U.h, U.hu / U.h, U.hv / U.h};
  return {U.h, 0.0, 0.0};
}

EarthPressure earth_pressure(const MaterialParams& params, double dudx, double dvdy) {
  if (params.pressure == PressureMode::Constant) return {params.constant_k, params.constant_k};

  const double cos_phi = std::cos(params.phi);
  const double cos_delta = std::cos(params.delta);
  const double ratio = (cos_phi * cos_phi) / (cos_delta * cos_delta);
  if (ratio > 1.0 + 1e-14) {
    throw HyperbolicityError("invalid friction angles: cos^2(phi)/cos^2(delta) > 1");
  }
  const double root_x = std::sqrt(std::max(0.0, 1.0 - ratio));
  const double sec2_phi = 1.0 / (cos_phi * cos_phi);

  const bool x_active = dudx >= 0.0;
  const bool y_active = dvdy >= 0.0;
  const double kx = 2.0 * (1.0 + (x_active ? -root_x : root_x)) * sec2_phi - 1.0;

  const double tan_delta = std::tan(params.delta);
  const double root_y = std::sqrt((kx - 1.0) * (kx - 1.0) + 4.0 * tan_delta * tan_delta);
  const double ky = 0.5 * (kx + 1.0 + (y_active ? -root_y : root_y));
  return {kx, ky};
}

BetaPair beta(const MaterialParams& params, double zeta, const EarthPressure& k) {
  const double scale = params.gravity * params.epsilon * std::cos(zeta);
  BetaPair b{scale * k.kx, scale * k.ky};
  if (!(b.bx > 0.0) || !(b.by > 0.0)) {
    throw HyperbolicityError("beta factors must be positive (cos(zeta) <= 0?)");
  }
  return b;
}

State flux_normal(const State& U, const BetaPair& b, Vec2 n, double h_dry) {
  const PrimitiveState p = primitive_from_conserved(U, h_dry);
  const double un = p.u * n.x + p.v * n.y;
  const double hun = p.h * un;
  const double pressure = 0.5 * p.h * p.h;
  return {hun, hun * p.u + pressure * b.bx * n.x, hun * p.v + pressure * b.by * n.y};
}

std::array<double, 3> eigenvalues(const State& U, const BetaPair& b, Vec2 n, double h_dry) {
  const PrimitiveState p = primitive_from_conserved(U, h_dry);
  const double un = p.u * n.x + p.v * n.y;
  const double c = b.bx * n.x * n.x + b.by * n.y * n.y;
  const double radicand = p.h * c;
  if (radicand < 0.0) throw HyperbolicityError("negative radicand in flux eigenvalues");
  const double a = std::sqrt(radicand);
  return {un - a, un, un + a};
}

SourceTerms source(const PrimitiveState& prim, double zeta, double dzeta_dx, Vec2 grad_zb,
                   const MaterialParams& params) {
  const double kappa = -dzeta_dx;
  const double cos_z = std::cos(zeta);
  const double speed = std::hypot(prim.u, prim.v);

  double fx = 0.0;
  double fy = 0.0;
  if (speed >= params.u_reg) {
    const double normal_load = cos_z + params.lambda * kappa * prim.u * prim.u;
    const double friction = std::tan(params.delta) * normal_load / speed;
    fx = prim.u * friction;
    fy = prim.v * friction;
  }
  const double sx = std::sin(zeta) - fx - params.epsilon * cos_z * grad_zb.x;
  const double sy = -fy - params.epsilon * cos_z * grad_zb.y;
  return {params.gravity * sx, params.gravity * sy};
}

namespace {

State flux_x(const State& U, double bx) {
  const double u = U.h > 0.0 ? U.hu / U.h : 0.0;
  const double v = U.h > 0.0 ? U.hv / U.h : 0.0;
  return {U.hu, U.hu * u + 0.5 * bx * U.h * U.h, U.hu * v};
}

State flux_y(const State& U, double by) {
  const double u = U.h > 0.0 ? U.hu / U.h : 0.0;
  const double v = U.h > 0.0 ? U.hv / U.h : 0.0;
  return {U.hv, U.hv * u, U.hv * v + 0.5 * by * U.h * U.h};
}

}  // namespace

State rotation_defect(const State& U, const BetaPair& b, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const State lhs = c * flux_x(U, b.bx) + s * flux_y(U, b.by);
  const State rotated{U.h, c * U.hu + s * U.hv, -s * U.hu + c * U.hv};
  const State f = flux_x(rotated, b.bx);
  const State back{f.h, c * f.hu - s * f.hv, s * f.hu + c * f.hv};
  return lhs - back;
}

}  // namespace avalanche
