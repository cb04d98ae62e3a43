#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cutfem {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
// z-component of the cross product; positive when (a,b) is a left turn.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;

  double diameter() const { return norm(hi - lo); }
};

inline double triangle_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * cross(b - a, c - a);
}

} // namespace cutfem
