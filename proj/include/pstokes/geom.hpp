#pragma once

#include <array>
#include <cmath>

namespace pstokes {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
/// Rotate by -90 degrees; for a CCW-traversed polygon edge this points outward.
inline Vec2 perp(Vec2 a) { return {a.y, -a.x}; }

/// Row-major 2x2 matrix; m[i][j] is row i, column j. Velocity gradients are
/// stored as Jacobians: row i holds the gradient of component i.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};

  Mat2 operator+(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  Mat2 operator-(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  Mat2 operator*(double s) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  Mat2& operator+=(const Mat2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
  double trace() const { return m[0][0] + m[1][1]; }
};

inline double frobenius_dot(const Mat2& a, const Mat2& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += a.m[i][j] * b.m[i][j];
  return s;
}
inline double frobenius_norm(const Mat2& a) { return std::sqrt(frobenius_dot(a, a)); }

/// Outer product a (x) b, i.e. r[i][j] = a_i b_j.
inline Mat2 outer(Vec2 a, Vec2 b) {
  Mat2 r;
  r.m[0][0] = a.x * b.x; r.m[0][1] = a.x * b.y;
  r.m[1][0] = a.y * b.x; r.m[1][1] = a.y * b.y;
  return r;
}

}  // namespace pstokes
