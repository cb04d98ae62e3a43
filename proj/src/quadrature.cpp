#include "cutfem/quadrature.hpp"

#include <cmath>
#include <map>

namespace cutfem {

namespace {

void push_sym3(std::vector<QuadPoint>& rule, double a, double b, double w) {
  // three permutations of barycentric (a,b,b); weight w is normalized to a
  // unit-weight rule, the factor 1/2 below accounts for the reference area
  double c[3][3] = {{a, b, b}, {b, a, b}, {b, b, a}};
  for (auto& bc : c) rule.push_back({{bc[1], bc[2]}, 0.5 * w});
}

void push_sym6(std::vector<QuadPoint>& rule, double a, double b, double c, double w) {
  double p[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
  for (auto& bc : p) rule.push_back({{bc[1], bc[2]}, 0.5 * w});
}

std::vector<QuadPoint> make_triangle_rule(int degree) {
  std::vector<QuadPoint> rule;
  if (degree <= 1) {
    rule.push_back({{1.0 / 3.0, 1.0 / 3.0}, 0.5});
  } else if (degree == 2) {
    push_sym3(rule, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    push_sym3(rule, 0.108103018168070, 0.445948490915965, 0.223381589678011);
    push_sym3(rule, 0.816847572980459, 0.091576213509771, 0.109951743655322);
  } else if (degree <= 6) {
    push_sym3(rule, 0.873821971016996, 0.063089014491502, 0.050844906370207);
    push_sym3(rule, 0.501426509658179, 0.249286745170910, 0.116786275726379);
    push_sym6(rule, 0.053145049844817, 0.310352451033784, 0.636502499121399,
              0.082851075618374);
  } else if (degree <= 8) {
    // collapsed 5x5 Gauss product on x = u, y = v(1-u) with Jacobian (1-u);
    // u needs one extra degree for the Jacobian, 5 points carry degree 9
    const double r7 = std::sqrt(10.0 / 7.0), r70 = std::sqrt(70.0);
    const double gx[5] = {-std::sqrt(5.0 + 2.0 * r7) / 3.0,
                          -std::sqrt(5.0 - 2.0 * r7) / 3.0, 0.0,
                          std::sqrt(5.0 - 2.0 * r7) / 3.0,
                          std::sqrt(5.0 + 2.0 * r7) / 3.0};
    const double gw[5] = {(322.0 - 13.0 * r70) / 900.0, (322.0 + 13.0 * r70) / 900.0,
                          128.0 / 225.0, (322.0 + 13.0 * r70) / 900.0,
                          (322.0 - 13.0 * r70) / 900.0};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        double u = 0.5 * (1.0 + gx[i]), v = 0.5 * (1.0 + gx[j]);
        rule.push_back({{u, v * (1.0 - u)}, 0.25 * gw[i] * gw[j] * (1.0 - u)});
      }
  } else {
    throw Error("reference_triangle_rule: degree > 8 not provided");
  }
  return rule;
}

std::vector<GaussPoint> make_segment_rule(int degree) {
  int npts = degree / 2 + 1;
  std::vector<double> x, w;
  switch (npts) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2:
      x = {-0.5773502691896257, 0.5773502691896257};
      w = {1.0, 1.0};
      break;
    case 3:
      x = {-0.7745966692414834, 0.0, 0.7745966692414834};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
           0.8611363115940526};
      w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
           0.3478548451374538};
      break;
    case 5:
      x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
           0.9061798459386640};
      w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
           0.4786286704993665, 0.2369268850561891};
      break;
    default:
      throw Error("reference_segment_rule: degree > 9 not provided");
  }
  std::vector<GaussPoint> rule(x.size());
  for (size_t i = 0; i < x.size(); ++i) rule[i] = {0.5 * (x[i] + 1.0), 0.5 * w[i]};
  return rule;
}

} // namespace

const std::vector<QuadPoint>& reference_triangle_rule(int degree) {
  // Built once for every supported degree; concurrent callers only read.
  static const auto cache = [] {
    std::map<int, std::vector<QuadPoint>> c;
    for (int d = 0; d <= 8; ++d) c.emplace(d, make_triangle_rule(d));
    return c;
  }();
  auto it = cache.find(degree);
  if (it == cache.end()) throw Error("reference_triangle_rule: degree > 8 not provided");
  return it->second;
}

const std::vector<GaussPoint>& reference_segment_rule(int degree) {
  static const auto cache = [] {
    std::map<int, std::vector<GaussPoint>> c;
    for (int d = 0; d <= 9; ++d) c.emplace(d, make_segment_rule(d));
    return c;
  }();
  auto it = cache.find(degree);
  if (it == cache.end()) throw Error("reference_segment_rule: degree > 9 not provided");
  return it->second;
}

std::vector<QuadPoint> triangle_quadrature(Vec2 a, Vec2 b, Vec2 c, int degree) {
  const auto& ref = reference_triangle_rule(degree);
  double jac = 2.0 * triangle_area(a, b, c); // signed; positive for ccw input
  std::vector<QuadPoint> out;
  out.reserve(ref.size());
  for (const auto& q : ref) {
    Vec2 p = a + q.point.x * (b - a) + q.point.y * (c - a);
    out.push_back({p, q.weight * jac});
  }
  return out;
}

} // namespace cutfem
