#include "pstokes/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace pstokes {

namespace {

// Golub-Welsch on a symmetric tridiagonal Jacobi matrix: nodes are the
// eigenvalues, weights mu0 * (first eigenvector component)^2.
std::vector<GaussPoint> golub_welsch(const std::vector<double>& diag,
                                     const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<GaussPoint> pts(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    pts[i] = {es.eigenvalues()(i), mu0 * v0 * v0};
  }
  return pts;
}

// Gauss-Legendre on [-1,1] mapped to [0,1].
std::vector<GaussPoint> legendre_01(int n) {
  std::vector<double> diag(n, 0.0), off(n - 1);
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    off[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  auto pts = golub_welsch(diag, off, 2.0);
  for (auto& p : pts) {
    p.x = 0.5 * (1.0 + p.x);
    p.w *= 0.5;
  }
  return pts;
}

// Gauss-Jacobi with weight (1-x) on [-1,1], mapped to weight (1-v) on [0,1].
std::vector<GaussPoint> jacobi10_01(int n) {
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k)
    diag[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k)
    off[k - 1] = std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0);
  auto pts = golub_welsch(diag, off, 2.0);
  for (auto& p : pts) {
    p.x = 0.5 * (1.0 + p.x);
    p.w *= 0.25;  // dv scaling 1/2 and weight (1-x) = 2(1-v)
  }
  return pts;
}

QuadRule conical_rule(int degree) {
  const int n = (degree + 2) / 2;  // 2n-1 >= degree
  const auto gl = legendre_01(n);
  const auto gj = jacobi10_01(n);
  QuadRule rule;
  rule.exactness_degree = degree;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  // x = u(1-v), y = v with the (1-v) Jacobian folded into the Jacobi weight.
  for (const auto& pv : gj)
    for (const auto& pu : gl) {
      const double x = pu.x * (1.0 - pv.x);
      const double y = pv.x;
      rule.points.push_back({{1.0 - x - y, x, y}, pu.w * pv.w});
    }
  return rule;
}

}  // namespace

std::vector<GaussPoint> gauss_legendre_01(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  if (n == 1) return {{0.5, 1.0}};
  return legendre_01(n);
}

QuadRule triangle_rule(int degree) {
  if (degree < 1 || degree > 20)
    throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree) +
                                " (supported range is 1..20)");
  QuadRule rule;
  rule.exactness_degree = degree;
  const double third = 1.0 / 3.0;
  switch (degree) {
    case 1:
      rule.points = {{{third, third, third}, 0.5}};
      break;
    case 2:
      rule.points = {{{0.0, 0.5, 0.5}, 1.0 / 6.0},
                     {{0.5, 0.0, 0.5}, 1.0 / 6.0},
                     {{0.5, 0.5, 0.0}, 1.0 / 6.0}};
      break;
    default:
      rule = conical_rule(degree);
  }
  return rule;
}

MappedRule map_rule(const QuadRule& rule, const std::array<Vec2, 3>& tri) {
  const double area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);
  const double h = std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]), norm(tri[0] - tri[2])});
  if (std::abs(area2) <= 2.0 * 1e-14 * h * h)
    throw std::invalid_argument("map_rule: degenerate triangle");
  MappedRule out;
  out.points.reserve(rule.points.size());
  out.weights.reserve(rule.points.size());
  out.bary.reserve(rule.points.size());
  for (const auto& qp : rule.points) {
    out.points.push_back(tri[0] * qp.bary[0] + tri[1] * qp.bary[1] + tri[2] * qp.bary[2]);
    out.weights.push_back(qp.weight * std::abs(area2));
    out.bary.push_back(qp.bary);
  }
  return out;
}

MappedRule graded_map_rule(const QuadRule& rule, const std::array<Vec2, 3>& tri, int corner) {
  constexpr int kLayers = 40;
  constexpr double kRatio = 0.5;
  const Vec2 c = tri[corner];
  Vec2 v1 = tri[(corner + 1) % 3];
  Vec2 v2 = tri[(corner + 2) % 3];
  const double parent_area2 = cross(tri[1] - tri[0], tri[2] - tri[0]);

  MappedRule out;
  const auto append = [&](const std::array<Vec2, 3>& sub) {
    const MappedRule mr = map_rule(rule, sub);
    for (std::size_t q = 0; q < mr.points.size(); ++q) {
      const Vec2 p = mr.points[q];
      const double l1 = cross(p - tri[0], tri[2] - tri[0]) / parent_area2;
      const double l2 = cross(tri[1] - tri[0], p - tri[0]) / parent_area2;
      out.points.push_back(p);
      out.weights.push_back(mr.weights[q]);
      out.bary.push_back({1.0 - l1 - l2, l1, l2});
    }
  };
  for (int layer = 0; layer < kLayers; ++layer) {
    const Vec2 m1 = c + (v1 - c) * kRatio;
    const Vec2 m2 = c + (v2 - c) * kRatio;
    append({m1, v1, v2});
    append({m1, v2, m2});
    v1 = m1;
    v2 = m2;
  }
  // The innermost triangle (scale kRatio^kLayers) is dropped: for r^alpha
  // integrands with alpha > -2 its mass is below double round-off, and its
  // points would hit the singularity guards of the closed-form solution.
  return out;
}

MappedRule map_rule_singular(const QuadRule& rule, const std::array<Vec2, 3>& tri,
                             const Vec2* singular_point) {
  if (singular_point != nullptr)
    for (int k = 0; k < 3; ++k)
      if (norm(tri[k] - *singular_point) < 1e-12) return graded_map_rule(rule, tri, k);
  return map_rule(rule, tri);
}

}  // namespace pstokes
