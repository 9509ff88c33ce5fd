#include "pstokes/exact_solution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pstokes {

namespace {
constexpr double kCornerRadius = 1e-14;
}

SingularSolution::SingularSolution(double nu) : nu_(nu) {
  omega_ = 1.5 * std::numbers::pi;
  // Newton refinement of the published rational; the no-slip conditions on
  // both reentrant legs reduce to sin(gamma * omega) = gamma.
  double g = kGammaSeed;
  for (int it = 0; it < 8; ++it) {
    const double f = std::sin(omega_ * g) - g;
    const double df = omega_ * std::cos(omega_ * g) - 1.0;
    g -= f / df;
  }
  gamma_ = g;
  cgo_ = std::cos(gamma_ * omega_);
}

double SingularSolution::psi(double phi) const {
  const double a = 1.0 + gamma_, b = 1.0 - gamma_;
  return (cgo_ / a) * std::sin(a * phi) - std::cos(a * phi) -
         (cgo_ / b) * std::sin(b * phi) + std::cos(b * phi);
}

double SingularSolution::psi_d1(double phi) const {
  const double a = 1.0 + gamma_, b = 1.0 - gamma_;
  return cgo_ * std::cos(a * phi) + a * std::sin(a * phi) -
         cgo_ * std::cos(b * phi) - b * std::sin(b * phi);
}

double SingularSolution::psi_d2(double phi) const {
  const double a = 1.0 + gamma_, b = 1.0 - gamma_;
  return -cgo_ * a * std::sin(a * phi) + a * a * std::cos(a * phi) +
         cgo_ * b * std::sin(b * phi) - b * b * std::cos(b * phi);
}

double SingularSolution::psi_d3(double phi) const {
  const double a = 1.0 + gamma_, b = 1.0 - gamma_;
  return -cgo_ * a * a * std::cos(a * phi) - a * a * a * std::sin(a * phi) +
         cgo_ * b * b * std::cos(b * phi) + b * b * b * std::sin(b * phi);
}

double SingularSolution::polar_angle(Vec2 p) const {
  double phi = std::atan2(p.y, p.x);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return phi;
}

Vec2 SingularSolution::velocity(Vec2 p) const {
  const double r = norm(p);
  if (r < kCornerRadius) return {0.0, 0.0};
  const double phi = polar_angle(p);
  const double ps = psi(phi), dps = psi_d1(phi);
  const double c = std::cos(phi), s = std::sin(phi);
  const double rg = std::pow(r, gamma_);
  return {rg * ((1.0 + gamma_) * s * ps + c * dps),
          rg * (-(1.0 + gamma_) * c * ps + s * dps)};
}

Mat2 SingularSolution::velocity_gradient(Vec2 p) const {
  const double r = norm(p);
  if (r < kCornerRadius)
    throw std::domain_error("velocity gradient is singular at the reentrant corner");
  const double phi = polar_angle(p);
  const double ps = psi(phi), dps = psi_d1(phi), d2ps = psi_d2(phi);
  const double c = std::cos(phi), s = std::sin(phi);
  const double g1 = (1.0 + gamma_) * s * ps + c * dps;
  const double g2 = -(1.0 + gamma_) * c * ps + s * dps;
  const double dg1 = (1.0 + gamma_) * c * ps + gamma_ * s * dps + c * d2ps;
  const double dg2 = (1.0 + gamma_) * s * ps - gamma_ * c * dps + s * d2ps;
  const double rg1 = std::pow(r, gamma_ - 1.0);
  // d/dx [r^g G(phi)] = r^(g-1) (g cos(phi) G - sin(phi) G'), similarly d/dy.
  Mat2 J;
  J.m[0][0] = rg1 * (gamma_ * c * g1 - s * dg1);
  J.m[0][1] = rg1 * (gamma_ * s * g1 + c * dg1);
  J.m[1][0] = rg1 * (gamma_ * c * g2 - s * dg2);
  J.m[1][1] = rg1 * (gamma_ * s * g2 + c * dg2);
  return J;
}

double SingularSolution::pressure0(Vec2 p) const {
  const double r = norm(p);
  if (r < kCornerRadius)
    throw std::domain_error("pressure0 is singular at the reentrant corner");
  const double phi = polar_angle(p);
  // Sign chosen so that -nu Laplace(v) + grad(p0) = 0.
  return -nu_ * std::pow(r, gamma_ - 1.0) *
         ((1.0 + gamma_) * (1.0 + gamma_) * psi_d1(phi) + psi_d3(phi)) / (1.0 - gamma_);
}

double SingularSolution::pressure_total(Vec2 p) const { return pressure0(p) + pressure_plus(p); }

double pressure_plus(Vec2 p) { return std::sin(p.x * p.y * std::numbers::pi); }

Vec2 benchmark_forcing(Vec2 p) {
  const double pi = std::numbers::pi;
  const double c = std::cos(p.x * p.y * pi);
  return {p.y * pi * c, p.x * pi * c};
}

}  // namespace pstokes
