#include "oadc/flowfield.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace oadc {

BaseField BaseField::linear_attractor(const Vec& attractor, double speed_cap) {
  BaseField f;
  f.kind = Kind::LinearAttractor;
  f.attractor = attractor;
  f.speed_cap = speed_cap;
  return f;
}

BaseField BaseField::constant(const Vec& direction, double speed) {
  BaseField f;
  f.kind = Kind::Constant;
  f.direction = direction.normalized();
  f.speed = speed;
  return f;
}

BaseField BaseField::rotated_linear(const Vec& attractor, double angle, double speed_cap) {
  BaseField f;
  f.kind = Kind::RotatedLinear;
  f.attractor = attractor;
  f.angle = angle;
  f.speed_cap = speed_cap;
  return f;
}

namespace {

Vec cap_speed(Vec v, double cap) {
  const double n = v.norm();
  if (n > cap && n > 0.0) v *= cap / n;
  return v;
}

}  // namespace

Vec base_velocity(const BaseField& field, const Vec& xi) {
  switch (field.kind) {
    case BaseField::Kind::LinearAttractor:
      return cap_speed(field.attractor - xi, field.speed_cap);
    case BaseField::Kind::Constant:
      return field.direction * field.speed;
    case BaseField::Kind::RotatedLinear: {
      Vec v = field.attractor - xi;
      const double c = std::cos(field.angle);
      const double s = std::sin(field.angle);
      const double x = v[0], y = v[1];
      v[0] = c * x - s * y;
      v[1] = s * x + c * y;
      return cap_speed(v, field.speed_cap);
    }
  }
  return Vec::Zero(xi.size());
}

std::pair<double, double> modulation_eigenvalues(double gamma) {
  if (gamma < 1.0) throw DomainError("modulation eigenvalues need gamma >= 1");
  return {1.0 - 1.0 / gamma, 1.0 + 1.0 / gamma};
}

Mat modulation_basis(const Obstacle& obstacle, const Vec& xi) {
  const Vec r = (xi - obstacle.reference_point).normalized();
  const Vec n = surface_normal(obstacle, xi);
  const Mat tangent_frame = orthonormal_completion(n);  // [n | e_1 ...]

  Mat basis(xi.size(), xi.size());
  basis.col(0) = r;
  basis.rightCols(xi.size() - 1) = tangent_frame.rightCols(xi.size() - 1);
  return basis;
}

Vec modulate(const Obstacle& obstacle, const Vec& xi, const Vec& base) {
  const auto [lambda_r, lambda_e] = modulation_eigenvalues(gamma(obstacle, xi));
  const Mat basis = modulation_basis(obstacle, xi);

  Vec eigenvalues = Vec::Constant(xi.size(), lambda_e);
  eigenvalues[0] = lambda_r;

  const Vec coeffs = basis.partialPivLu().solve(base);
  return basis * eigenvalues.cwiseProduct(coeffs).matrix();
}

namespace {

Vec modulate_impl(const Environment& env, const BaseField& field, const Vec& xi,
                  bool skip_interior) {
  const Vec base = base_velocity(field, xi);

  std::vector<double> gammas;
  std::vector<Vec> velocities;
  for (const auto& o : env.obstacles) {
    if (o.is_interior(xi)) {
      if (skip_interior) continue;
      throw InteriorPointError("cannot modulate at an interior point");
    }
    gammas.push_back(gamma(o, xi));
    velocities.push_back(modulate(o, xi, base));
  }
  if (velocities.empty()) return base;
  if (velocities.size() == 1) return velocities.front();

  const auto weights = closeness_weights(gammas);
  Vec direction = Vec::Zero(xi.size());
  double magnitude = 0.0;
  for (size_t i = 0; i < velocities.size(); ++i) {
    direction += weights[i] * velocities[i];
    magnitude += weights[i] * velocities[i].norm();
  }
  const double dn = direction.norm();
  if (dn < 1e-15) return Vec::Zero(xi.size());
  return (magnitude / dn) * direction;
}

}  // namespace

Vec modulate(const Environment& env, const BaseField& field, const Vec& xi) {
  return modulate_impl(env, field, xi, /*skip_interior=*/false);
}

Vec modulate_permissive(const Environment& env, const BaseField& field, const Vec& xi) {
  return modulate_impl(env, field, xi, /*skip_interior=*/true);
}

}  // namespace oadc
