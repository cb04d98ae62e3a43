#pragma once

#include <vector>

#include "cutfem/geometry.hpp"

namespace cutfem {

struct QuadPoint {
  Vec2 point;
  double weight = 0.0;
};

// Symmetric rule on the reference triangle (0,0)-(1,0)-(0,1), exact for
// polynomials up to the requested degree. Weights sum to 1/2.
const std::vector<QuadPoint>& reference_triangle_rule(int degree);

// Gauss-Legendre nodes/weights on [0,1]; exact up to the requested degree.
struct GaussPoint {
  double t = 0.0;
  double weight = 0.0;
};
const std::vector<GaussPoint>& reference_segment_rule(int degree);

// Map the reference rule to the physical triangle (a,b,c).
std::vector<QuadPoint> triangle_quadrature(Vec2 a, Vec2 b, Vec2 c, int degree);

} // namespace cutfem
