#include "oadc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oadc {

namespace {

constexpr double kRayTol = 1e-12;
constexpr double kContactEps = 1e-9;

Vec clamp_to_box(const Vec& xi, const Vec& center, const Vec& half_extents) {
  Vec q = xi - center;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    q[i] = std::clamp(q[i], -half_extents[i], half_extents[i]);
  }
  return center + q;
}

// Exact distance from xi to the core box surface, negative inside.
double box_core_offset(const Vec& xi, const Vec& center, const Vec& half_extents) {
  Vec q = (xi - center).cwiseAbs() - half_extents;
  double outside = q.cwiseMax(0.0).norm();
  double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

// Distance along the unit ray direction from the reference point to the
// margined surface. The shape is star-shaped about the reference point, so
// the crossing is unique; the box uses bisection on the surface offset.
double ray_surface_distance(const Obstacle& o, const Vec& unit_dir) {
  if (o.shape == Obstacle::Shape::Sphere) {
    const double rho = o.radius + o.margin;
    const Vec d = o.reference_point - o.center;
    // || d + t*u ||^2 = rho^2, take the positive root.
    const double b = d.dot(unit_dir);
    const double c = d.squaredNorm() - rho * rho;
    const double disc = b * b - c;
    return -b + std::sqrt(std::max(disc, 0.0));
  }

  auto offset = [&](double t) {
    return box_core_offset(o.reference_point + t * unit_dir, o.center, o.half_extents) - o.margin;
  };
  double hi = o.half_extents.norm() + o.margin;
  while (offset(hi) < 0.0) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > kRayTol) {
    const double mid = 0.5 * (lo + hi);
    (offset(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;  // offset(hi) >= 0: the returned surface point is never interior
}

// Outward unit normal of the margined surface at a surface point.
Vec margined_surface_normal(const Obstacle& o, const Vec& surface_point) {
  if (o.shape == Obstacle::Shape::Sphere) {
    return (surface_point - o.center).normalized();
  }
  const Vec core = clamp_to_box(surface_point, o.center, o.half_extents);
  const Vec dir = surface_point - core;
  const double n = dir.norm();
  if (n > 1e-12) return dir / n;
  // Zero-margin box face: pick the axis of least interior clearance.
  Vec q = (surface_point - o.center).cwiseAbs() - o.half_extents;
  Eigen::Index axis;
  q.maxCoeff(&axis);
  Vec normal = Vec::Zero(o.dim());
  normal[axis] = (surface_point[axis] >= o.center[axis]) ? 1.0 : -1.0;
  return normal;
}

struct RayQuery {
  Vec unit_dir;
  double range;         // distance from reference point to xi
  double surface_dist;  // distance from reference point to the surface
};

RayQuery ray_query(const Obstacle& o, const Vec& xi) {
  const Vec offset = xi - o.reference_point;
  const double range = offset.norm();
  if (range < 1e-15) {
    // The reference point itself is the deepest interior point.
    return {Vec::Unit(o.dim(), 0), 0.0, ray_surface_distance(o, Vec::Unit(o.dim(), 0))};
  }
  const Vec u = offset / range;
  return {u, range, ray_surface_distance(o, u)};
}

void require_exterior(const Obstacle& o, const Vec& xi) {
  if (o.is_interior(xi)) {
    throw InteriorPointError("query point lies inside an obstacle (gamma < 1)");
  }
}

}  // namespace

Obstacle Obstacle::sphere(const Vec& center, double radius, double margin,
                          std::optional<Vec> reference_point) {
  Obstacle o;
  o.shape = Shape::Sphere;
  o.center = center;
  o.radius = radius;
  o.margin = margin;
  o.reference_point = reference_point.value_or(center);
  o.validate();
  return o;
}

Obstacle Obstacle::box(const Vec& center, const Vec& half_extents, double margin,
                       std::optional<Vec> reference_point) {
  Obstacle o;
  o.shape = Shape::Box;
  o.center = center;
  o.half_extents = half_extents;
  o.margin = margin;
  o.reference_point = reference_point.value_or(center);
  o.validate();
  return o;
}

double Obstacle::surface_offset(const Vec& xi) const {
  if (shape == Shape::Sphere) {
    return (xi - center).norm() - (radius + margin);
  }
  return box_core_offset(xi, center, half_extents) - margin;
}

void Obstacle::validate() const {
  if (center.size() == 0) throw ConfigError("obstacle center must be non-empty");
  if (margin < 0.0) throw ConfigError("obstacle margin must be >= 0");
  if (shape == Shape::Sphere) {
    if (radius <= 0.0) throw ConfigError("sphere radius must be > 0");
  } else {
    if (half_extents.size() != center.size()) {
      throw ConfigError("box half_extents dimension mismatch");
    }
    if ((half_extents.array() <= 0.0).any()) {
      throw ConfigError("box half_extents must be > 0");
    }
  }
  if (reference_point.size() != center.size()) {
    throw ConfigError("reference point dimension mismatch");
  }
  if (surface_offset(reference_point) >= 0.0) {
    throw ConfigError("reference point must lie strictly inside the margined shape");
  }
}

void Environment::validate() const {
  for (const auto& o : obstacles) {
    o.validate();
    if (o.dim() != dim()) throw ConfigError("obstacles must share one dimension");
  }
}

double gamma(const Obstacle& obstacle, const Vec& xi) {
  require_exterior(obstacle, xi);
  const RayQuery q = ray_query(obstacle, xi);
  return 1.0 + std::max(q.range - q.surface_dist, 0.0);
}

Vec boundary_point(const Obstacle& obstacle, const Vec& xi) {
  require_exterior(obstacle, xi);
  const RayQuery q = ray_query(obstacle, xi);
  return obstacle.reference_point + q.surface_dist * q.unit_dir;
}

Vec surface_normal(const Obstacle& obstacle, const Vec& xi) {
  require_exterior(obstacle, xi);
  const RayQuery q = ray_query(obstacle, xi);
  const Vec hit = obstacle.reference_point + q.surface_dist * q.unit_dir;
  const Vec m = margined_surface_normal(obstacle, hit);

  // grad Gamma = u + rho / (r * <m, u>) * (I - u u^T) m, with r the range
  // to the query point and rho the ray distance to the surface. On the
  // surface this reduces to m, far away it approaches u.
  const double r = q.range;
  const double mu = m.dot(q.unit_dir);
  const Vec tangential = m - mu * q.unit_dir;
  Vec grad = q.unit_dir + (q.surface_dist / (r * mu)) * tangential;
  return grad.normalized();
}

double signed_distance(const Obstacle& obstacle, const Vec& xi) {
  const RayQuery q = ray_query(obstacle, xi);
  return q.range - q.surface_dist;
}

double signed_distance(const Environment& env, const Vec& xi) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : env.obstacles) best = std::min(best, signed_distance(o, xi));
  return best;
}

std::vector<double> closeness_weights(const std::vector<double>& gammas) {
  std::vector<double> w(gammas.size(), 0.0);
  if (gammas.empty()) return w;

  // Contact limit: the first obstacle (list order) within the epsilon
  // window takes all weight.
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i] - 1.0 < kContactEps) {
      w[i] = 1.0;
      return w;
    }
  }
  double total = 0.0;
  for (size_t i = 0; i < gammas.size(); ++i) {
    w[i] = 1.0 / (gammas[i] - 1.0);
    total += w[i];
  }
  for (auto& wi : w) wi /= total;
  return w;
}

namespace {

DangerAssessment assess_impl(const Environment& env, const Vec& xi, double gamma_crit,
                             bool skip_interior) {
  if (gamma_crit <= 1.0) throw DomainError("gamma_crit must be > 1");

  std::vector<double> gammas;
  std::vector<Vec> normals;
  gammas.reserve(env.obstacles.size());
  for (const auto& o : env.obstacles) {
    if (skip_interior && o.is_interior(xi)) continue;
    gammas.push_back(gamma(o, xi));
    normals.push_back(surface_normal(o, xi));
  }

  DangerAssessment out;
  out.averaged_normal = Vec::Zero(xi.size());
  if (gammas.empty()) return out;

  out.gamma_min = *std::min_element(gammas.begin(), gammas.end());
  const auto weights = closeness_weights(gammas);
  for (size_t i = 0; i < normals.size(); ++i) {
    out.averaged_normal += weights[i] * normals[i];
  }
  const double proximity = std::max(0.0, (gamma_crit - out.gamma_min) / (gamma_crit - 1.0));
  out.weight = std::clamp(proximity * out.averaged_normal.norm(), 0.0, 1.0);
  return out;
}

}  // namespace

DangerAssessment assess(const Environment& env, const Vec& xi, double gamma_crit) {
  return assess_impl(env, xi, gamma_crit, /*skip_interior=*/false);
}

DangerAssessment assess_permissive(const Environment& env, const Vec& xi, double gamma_crit) {
  return assess_impl(env, xi, gamma_crit, /*skip_interior=*/true);
}

}  // namespace oadc
