#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "oadc/basis.hpp"
#include "oadc/errors.hpp"

namespace oadc {

/// Star-shaped obstacle: a sphere or an axis-aligned box, inflated by a
/// nonnegative margin (Minkowski sum with a ball, so box corners are
/// rounded and normals stay continuous). Distances are measured along the
/// ray from the reference point, which must lie strictly inside the
/// margined shape.
struct Obstacle {
  enum class Shape { Sphere, Box };

  Shape shape = Shape::Sphere;
  Vec center;
  double radius = 0.0;  // sphere only
  Vec half_extents;     // box only
  double margin = 0.0;
  Vec reference_point;  // defaults to center

  static Obstacle sphere(const Vec& center, double radius, double margin = 0.0,
                         std::optional<Vec> reference_point = std::nullopt);
  static Obstacle box(const Vec& center, const Vec& half_extents, double margin = 0.0,
                      std::optional<Vec> reference_point = std::nullopt);

  int dim() const { return static_cast<int>(center.size()); }

  /// Signed offset to the margined surface measured perpendicular to the
  /// core shape: negative inside, zero on the surface. For the box this is
  /// the exact rounded-box distance, for the sphere the radial one.
  double surface_offset(const Vec& xi) const;

  /// Interior test with a small boundary band: points within `tol` of the
  /// surface count as boundary, matching the 1e-9 tolerance of
  /// boundary_point.
  bool is_interior(const Vec& xi, double tol = 1e-9) const {
    return surface_offset(xi) < -tol;
  }

  /// Validates shape parameters and the reference point location.
  void validate() const;
};

struct Environment {
  std::vector<Obstacle> obstacles;

  int dim() const { return obstacles.empty() ? 0 : obstacles.front().dim(); }
  void validate() const;
};

/// Proximity summary at a query point: the smallest distance value over
/// all obstacles, the closeness-weighted average of their unit normals,
/// and the resulting danger weight in [0, 1].
struct DangerAssessment {
  double gamma_min = std::numeric_limits<double>::infinity();
  Vec averaged_normal;
  double weight = 0.0;
};

/// Distance value Gamma >= 1: 1 on the margined surface, growing by one
/// per meter travelled outward along the ray from the reference point.
/// Throws InteriorPointError for strictly interior query points.
double gamma(const Obstacle& obstacle, const Vec& xi);

/// Intersection of the ray from the reference point through xi with the
/// margined surface; satisfies gamma(obstacle, result) == 1.
Vec boundary_point(const Obstacle& obstacle, const Vec& xi);

/// Unit gradient of gamma. Coincides with the surface normal on the
/// boundary and bends toward the ray direction far away.
Vec surface_normal(const Obstacle& obstacle, const Vec& xi);

/// Ray distance to the margined surface, negative when xi is inside.
/// Defined everywhere; used for collision metrics.
double signed_distance(const Obstacle& obstacle, const Vec& xi);

/// Minimum signed distance over all obstacles (+inf for an empty scene).
double signed_distance(const Environment& env, const Vec& xi);

/// Closeness weights 1/(gamma_o - 1), normalized to sum one. When some
/// gamma_o - 1 < 1e-9 the closest such obstacle (list order breaks ties)
/// takes weight one, the exact limit of the expression.
std::vector<double> closeness_weights(const std::vector<double>& gammas);

/// Danger assessment over the whole scene. Gamma_crit must be > 1.
/// Throws InteriorPointError if xi is interior to any obstacle.
DangerAssessment assess(const Environment& env, const Vec& xi, double gamma_crit);

/// Same as assess() but obstacles containing xi are skipped instead of
/// raising. The simulator uses this so runs that have already collided
/// keep producing finite measurements.
DangerAssessment assess_permissive(const Environment& env, const Vec& xi, double gamma_crit);

}  // namespace oadc
