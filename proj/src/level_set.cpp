#include "cutfem/level_set.hpp"

#include <cmath>
#include <cstdio>

namespace cutfem {

namespace {

double gasket_phi(Vec2 p, double w1, double w2) {
  double x = p.x, y = p.y;
  double circle = x * x + y * y - 1.0;
  double lobe_r = (x - 1.5) * (x - 1.5) + y * y - 0.02;
  double lobe_l = (x + 1.5) * (x + 1.5) + y * y - 0.02;
  // cos(atan(5y/x)) written radical-free; the x == y == 0 limit along the
  // y-axis is used so the field stays finite at the origin
  double denom = std::sqrt(x * x + 25.0 * y * y);
  double cosw = denom > 0.0 ? std::fabs(x) / denom : 0.0;
  double hull = (4.0 / 9.0) * x * x + 0.0625 * y * y - 1.0 / w1 - w2 * cosw;
  return circle * lobe_r * lobe_l * hull;
}

} // namespace

double LevelSetSpec::operator()(Vec2 p) const {
  switch (kind) {
    case LevelSetKind::UnitCircle:
      return p.x * p.x + p.y * p.y - 1.0;
    case LevelSetKind::Gasket:
      return gasket_phi(p, omega1, omega2);
    case LevelSetKind::User:
      return user(p);
  }
  throw Error("LevelSetSpec: bad kind");
}

std::string LevelSetSpec::describe() const {
  char buf[96];
  switch (kind) {
    case LevelSetKind::UnitCircle:
      return "unit_circle";
    case LevelSetKind::Gasket:
      std::snprintf(buf, sizeof buf, "gasket(%.17g,%.17g)", omega1, omega2);
      return buf;
    case LevelSetKind::User:
      return "user";
  }
  return "?";
}

LevelSetSpec unit_circle_level_set() {
  LevelSetSpec ls;
  ls.kind = LevelSetKind::UnitCircle;
  return ls;
}

LevelSetSpec gasket_level_set(double omega1, double omega2) {
  if (omega1 <= 0.0) throw Error("gasket_level_set: omega1 must be positive");
  LevelSetSpec ls;
  ls.kind = LevelSetKind::Gasket;
  ls.omega1 = omega1;
  ls.omega2 = omega2;
  return ls;
}

LevelSetSpec user_level_set(std::function<double(Vec2)> phi) {
  LevelSetSpec ls;
  ls.kind = LevelSetKind::User;
  ls.user = std::move(phi);
  return ls;
}

} // namespace cutfem
