#pragma once

#include "pstokes/geom.hpp"

namespace pstokes {

/// Published rational approximation of the corner exponent (Verfuerth).
inline constexpr double kGammaSeed = 856399.0 / 1572864.0;

/// Manufactured singular Stokes solution on the L-shaped domain
/// (-1,1)^2 \ ((0,1)x(-1,0)).
///
/// Polar angle measured counterclockwise from the positive x-axis,
/// phi in [0, 3pi/2]; the removed quadrant covers (3pi/2, 2pi). The corner
/// exponent gamma is the root of sin(3pi/2 gamma) = gamma near 0.5445, which
/// zeroes psi and psi' on both reentrant legs; the stream function
/// r^(1+gamma) psi(phi) is biharmonic, so div v = 0 and
/// -nu Laplace(v) + grad(p0) = 0 hold exactly.
class SingularSolution {
 public:
  explicit SingularSolution(double nu = 1.0);

  double gamma() const { return gamma_; }
  double omega() const { return omega_; }
  double nu() const { return nu_; }

  double psi(double phi) const;
  double psi_d1(double phi) const;
  double psi_d2(double phi) const;
  double psi_d3(double phi) const;

  /// Velocity; returns 0 at the corner (r^gamma -> 0).
  Vec2 velocity(Vec2 p) const;
  /// Velocity Jacobian; throws std::domain_error for r < 1e-14.
  Mat2 velocity_gradient(Vec2 p) const;
  /// Singular pressure, scales linearly in nu; throws for r < 1e-14.
  double pressure0(Vec2 p) const;
  double pressure_total(Vec2 p) const;  // p0 + p_plus

 private:
  double polar_angle(Vec2 p) const;
  double gamma_;
  double omega_;
  double nu_;
  double cgo_;  // cos(gamma * omega)
};

/// Smooth pressure component p_plus = sin(x y pi) and the benchmark forcing
/// f = grad(p_plus).
double pressure_plus(Vec2 p);
Vec2 benchmark_forcing(Vec2 p);

}  // namespace pstokes
