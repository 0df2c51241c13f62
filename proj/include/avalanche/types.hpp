#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace avalanche {

using Index = std::size_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Conserved variables (h, hu, hv) of the depth-averaged model.
struct State {
  double h = 0.0;
  double hu = 0.0;
  double hv = 0.0;

  State& operator+=(const State& o) { h += o.h; hu += o.hu; hv += o.hv; return *this; }
  State& operator-=(const State& o) { h -= o.h; hu -= o.hu; hv -= o.hv; return *this; }
  State& operator*=(double s) { h *= s; hu *= s; hv *= s; return *this; }
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(State a, double s) { return a *= s; }
  friend State operator*(double s, State a) { return a *= s; }
  friend bool operator==(const State&, const State&) = default;

  bool finite() const { return std::isfinite(h) && std::isfinite(hu) && std::isfinite(hv); }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or geometrically invalid mesh input.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Parameters or states for which the system stops being hyperbolic.
class HyperbolicityError : public Error {
 public:
  using Error::Error;
};

/// Solver breakdown: non-finite values or a collapsing time step.
class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace avalanche
