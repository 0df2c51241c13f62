#include "avalanche/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace avalanche {

double gravity_coeff(const BetaPair& b, Vec2 n) {
  const double c = b.bx * n.x * n.x + b.by * n.y * n.y;
  if (c < 0.0) throw HyperbolicityError("negative directional gravity coefficient");
  return c;
}

namespace {

struct Side {
  double h;
  double un;
  double c;
};

Side side(const State& U, const BetaPair& b, Vec2 n, double h_dry) {
  const PrimitiveState p = primitive_from_conserved(U, h_dry);
  return {p.h, p.u * n.x + p.v * n.y, gravity_coeff(b, n)};
}

bool is_dry(const State& U, double h_dry) { return U.h < h_dry; }

}  // namespace

StarEstimate star_estimates(const RiemannStates& s) {
  if (is_dry(s.left, s.h_dry) || is_dry(s.right, s.h_dry)) {
    throw Error("star_estimates requires wet states on both sides");
  }
  const Side L = side(s.left, s.beta_left, s.n, s.h_dry);
  const Side R = side(s.right, s.beta_right, s.n, s.h_dry);
  const double aL = std::sqrt(L.c * L.h);
  const double aR = std::sqrt(R.c * R.h);
  const double c_mean = 0.5 * (L.c + R.c);
  const double bracket = 0.5 * (aL + aR) + 0.25 * (L.un - R.un);
  // Grouped so that swapping sides negates u_* exactly.
  return {0.5 * (L.un + R.un) + (aL - aR), bracket * bracket / c_mean};
}

WaveSpeeds wave_speeds(const RiemannStates& s) {
  const bool dry_left = is_dry(s.left, s.h_dry);
  const bool dry_right = is_dry(s.right, s.h_dry);
  if (dry_left && dry_right) throw Error("wave_speeds called with both sides dry");

  const Side L = side(s.left, s.beta_left, s.n, s.h_dry);
  const Side R = side(s.right, s.beta_right, s.n, s.h_dry);
  if (dry_right) {
    const double aL = std::sqrt(L.c * L.h);
    return {L.un - aL, L.un + 2.0 * aL};
  }
  if (dry_left) {
    const double aR = std::sqrt(R.c * R.h);
    return {R.un - 2.0 * aR, R.un + aR};
  }
  const StarEstimate star = star_estimates(s);
  const double aL = std::sqrt(L.c * L.h);
  const double aR = std::sqrt(R.c * R.h);
  return {std::min(L.un - aL, star.u_star - std::sqrt(L.c * star.h_star)),
          std::max(R.un + aR, star.u_star + std::sqrt(R.c * star.h_star))};
}

State hll_flux(const RiemannStates& s) {
  if (is_dry(s.left, s.h_dry) && is_dry(s.right, s.h_dry)) return {};

  const WaveSpeeds w = wave_speeds(s);
  State flux;
  if (w.left >= 0.0) {
    flux = flux_normal(s.left, s.beta_left, s.n, s.h_dry);
  } else if (w.right <= 0.0) {
    flux = flux_normal(s.right, s.beta_right, s.n, s.h_dry);
  } else {
    const State fl = flux_normal(s.left, s.beta_left, s.n, s.h_dry);
    const State fr = flux_normal(s.right, s.beta_right, s.n, s.h_dry);
    flux = (w.right * fl - w.left * fr + (w.right * w.left) * (s.right - s.left)) *
           (1.0 / (w.right - w.left));
  }
  if (!flux.finite()) throw SolverError("non-finite HLL flux");
  return flux;
}

}  // namespace avalanche
