#pragma once

#include <algorithm>
#include <cmath>

namespace islandap {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Counterclockwise rotation by a quarter turn: (x, y) -> (-y, x).
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Half-line origin + s * direction, s > 0. `direction` need not be unit length.
struct Ray {
  Vec2 origin;
  Vec2 direction;
};

/// Horizontal open segment {y = anchor.y, x strictly between anchor.x and x_end}.
/// Cut points of closed field lines are chosen on these.
struct CutRay {
  Vec2 anchor;
  double x_end = 0.0;

  bool contains(Vec2 p, double tol) const {
    if (std::abs(p.y - anchor.y) > tol) return false;
    const double lo = std::min(anchor.x, x_end);
    const double hi = std::max(anchor.x, x_end);
    return p.x > lo + tol && p.x < hi - tol;
  }
};

}  // namespace islandap
