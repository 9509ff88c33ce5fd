#pragma once

#include <array>
#include <vector>

#include "pstokes/geom.hpp"

namespace pstokes {

struct QuadPoint {
  std::array<double, 3> bary;  // barycentric coordinates on the reference triangle
  double weight;
};

/// Quadrature rule on the reference triangle (0,0)-(1,0)-(0,1).
/// Weights sum to the reference area 1/2; all points are interior or on edges,
/// never at vertices.
struct QuadRule {
  std::vector<QuadPoint> points;
  int exactness_degree = 0;
};

/// Rule exact for polynomials of total degree <= degree, 1 <= degree <= 20.
/// Degree 1 is the centroid rule, degree 2 the edge-midpoint rule; higher
/// degrees use a conical-product Gauss rule. Deterministic per degree.
QuadRule triangle_rule(int degree);

struct MappedRule {
  std::vector<Vec2> points;
  std::vector<double> weights;  // sum to the triangle area
  std::vector<std::array<double, 3>> bary;  // w.r.t. the mapped triangle
};

/// Affine push-forward of a reference rule to a physical triangle.
MappedRule map_rule(const QuadRule& rule, const std::array<Vec2, 3>& tri);

/// Composite push-forward geometrically graded toward the vertex with local
/// index corner, for integrands with a point singularity there (r^alpha,
/// alpha > -2). Converges to round-off for the benchmark exponents.
MappedRule graded_map_rule(const QuadRule& rule, const std::array<Vec2, 3>& tri, int corner);

/// map_rule, or graded_map_rule when a vertex coincides with singular_point
/// (within 1e-12).
MappedRule map_rule_singular(const QuadRule& rule, const std::array<Vec2, 3>& tri,
                             const Vec2* singular_point);

/// Gauss-Legendre nodes/weights on [0,1]; exact for degree <= 2n-1.
struct GaussPoint {
  double x;
  double w;
};
std::vector<GaussPoint> gauss_legendre_01(int n);

}  // namespace pstokes
