#pragma once

#include <utility>

#include "oadc/geometry.hpp"

namespace oadc {

/// Nominal desired-velocity field f^b.
struct BaseField {
  enum class Kind { LinearAttractor, Constant, RotatedLinear };

  Kind kind = Kind::LinearAttractor;
  Vec attractor;           // linear_attractor / rotated_linear
  double speed_cap = 1.0;  // m/s
  Vec direction;           // constant field (unit)
  double speed = 1.0;      // constant field magnitude
  double angle = 0.0;      // rotated_linear, applied in the first two axes

  static BaseField linear_attractor(const Vec& attractor, double speed_cap);
  static BaseField constant(const Vec& direction, double speed);
  static BaseField rotated_linear(const Vec& attractor, double angle, double speed_cap);
};

Vec base_velocity(const BaseField& field, const Vec& xi);

/// Stretching factors of the avoidance modulation: the flow is slowed to
/// lambda_r <= 1 along the reference direction and sped up to
/// lambda_e >= 1 along the tangents. Throws DomainError for gamma < 1.
std::pair<double, double> modulation_eigenvalues(double gamma);

/// Basis [r | e_1 ... e_{N-1}] of the single-obstacle modulation: r points
/// away from the reference point, the tangents complete the surface normal
/// deterministically and are orthogonal to it.
Mat modulation_basis(const Obstacle& obstacle, const Vec& xi);

/// Single-obstacle modulated velocity E diag(lr, le, ...) E^-1 f_base.
Vec modulate(const Obstacle& obstacle, const Vec& xi, const Vec& base);

/// Scene-level avoidance velocity. Per-obstacle modulated velocities are
/// combined with the same closeness weights as the danger assessment:
/// direction from the weighted sum (renormalized), magnitude as the
/// weighted mean of the per-obstacle magnitudes. No obstacles: the base
/// field unchanged. Throws InteriorPointError.
Vec modulate(const Environment& env, const BaseField& field, const Vec& xi);

/// Like modulate() but skips obstacles that contain xi (simulator use).
Vec modulate_permissive(const Environment& env, const BaseField& field, const Vec& xi);

}  // namespace oadc
