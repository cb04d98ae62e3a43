#pragma once

#include <functional>
#include <string>

#include "cutfem/geometry.hpp"

namespace cutfem {

enum class LevelSetKind { UnitCircle, Gasket, User };

// Scalar field phi over the hold-all domain; the physical domain is
// {phi < 0} and the boundary is the zero set. Interface segments are
// Dirichlet unless a neumann predicate marks them otherwise.
struct LevelSetSpec {
  LevelSetKind kind = LevelSetKind::UnitCircle;
  double omega1 = 0.0; // gasket parameters
  double omega2 = 0.0;
  std::function<double(Vec2)> user;
  std::function<bool(Vec2)> neumann; // evaluated at segment midpoints

  double operator()(Vec2 p) const;
  std::string describe() const;
};

LevelSetSpec unit_circle_level_set();
LevelSetSpec gasket_level_set(double omega1, double omega2);
LevelSetSpec user_level_set(std::function<double(Vec2)> phi);

} // namespace cutfem
