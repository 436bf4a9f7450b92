#include "oadc/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

namespace oadc {

double dissipation(const Vec& xi_dot, const Vec& f, const Mat& damping) {
  return xi_dot.dot(damping * (xi_dot - f));
}

PassivityBoundary passivity_boundary(const Vec& f, const Mat& basis_q, const Vec& values_s) {
  Eigen::JacobiSVD<Mat> svd(basis_q);
  const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
  if (!std::isfinite(cond) || cond > 1e8) {
    throw SingularBasisError("damping basis is ill-conditioned");
  }
  if ((values_s.array() <= 0.0).any()) {
    throw DomainError("damping values must be positive");
  }

  PassivityBoundary b;
  b.basis_q = basis_q;
  b.values_s = values_s;
  b.f = f;
  b.center = f / 2.0;
  b.axes = basis_q;

  // In v = sqrt(S) Q^T xi_dot coordinates the non-passive set is the ball
  // of radius ||sqrt(S) Q^T f|| / 2; mapping back scales axis i by
  // 1/sqrt(s_i).
  const Vec f_scaled = values_s.cwiseSqrt().asDiagonal() * (basis_q.transpose() * f);
  const double radius = 0.5 * f_scaled.norm();
  b.semi_axes = radius * values_s.cwiseSqrt().cwiseInverse();
  return b;
}

PassivityBoundary passivity_boundary(const Vec& f, const Mat& damping) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(damping);
  return passivity_boundary(f, eig.eigenvectors(), eig.eigenvalues());
}

std::vector<Vec> PassivityBoundary::sample(int count) const {
  std::vector<Vec> points;
  points.reserve(count);
  const Vec f_scaled = values_s.cwiseSqrt().asDiagonal() * (basis_q.transpose() * f);
  const double radius = 0.5 * f_scaled.norm();
  const Vec center_scaled = 0.5 * f_scaled;

  const Mat back = basis_q * values_s.cwiseSqrt().cwiseInverse().asDiagonal();
  if (f.size() == 1) {
    for (int k = 0; k < count; ++k) {
      const Vec v = center_scaled + (k % 2 == 0 ? radius : -radius) * Vec::Ones(1);
      points.push_back(back * v);
    }
    return points;
  }

  // Great circle in the plane spanned by the scaled field direction and
  // one orthogonal direction; for N = 2 this is the whole boundary.
  Vec e1 = Vec::Unit(f.size(), 0);
  Vec e2 = Vec::Unit(f.size(), 1);
  if (radius > 0.0) {
    e1 = f_scaled / f_scaled.norm();
    e2 = orthonormal_completion(e1).col(1);
  }
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * M_PI * k / count;
    const Vec v = center_scaled + radius * (std::cos(angle) * e1 + std::sin(angle) * e2);
    points.push_back(back * v);
  }
  return points;
}

double discrete_damping_limit(const Mat& mass, double dt) {
  if (dt <= 0.0) throw DomainError("dt must be > 0");
  const double min_eig = Eigen::SelfAdjointEigenSolver<Mat>(mass).eigenvalues().minCoeff();
  return 2.0 * min_eig / dt;
}

ImpulseBound collision_impulse_bound(const DampingSpec& spec, double mass, double distance) {
  if (distance <= 0.0) throw DomainError("distance must be > 0");
  if (mass <= 0.0) throw DomainError("mass must be > 0");
  ImpulseBound b;
  b.rate = spec.s_follow / mass;
  b.max_impact_speed = b.rate * distance;
  return b;
}

namespace {

ControllerStats stats_of(const std::vector<RunMetrics>& metrics, const std::string& label) {
  const EpochStats s = summarize(metrics, 0.0);
  ControllerStats out;
  out.label = label;
  out.mean_min_distance = s.mean_min_distance;
  out.std_min_distance = s.std_min_distance;
  out.mean_max_force = s.mean_max_force;
  out.std_max_force = s.std_max_force;
  out.epochs = s.epochs;
  return out;
}

}  // namespace

ControllerComparison compare_controllers(const std::vector<RunMetrics>& records_a,
                                         const std::vector<RunMetrics>& records_b,
                                         const std::string& label_a, const std::string& label_b) {
  if (records_a.size() != records_b.size()) {
    throw DomainError("controller comparison needs equal epoch counts");
  }
  ControllerComparison c;
  c.rows.push_back(stats_of(records_a, label_a));
  c.rows.push_back(stats_of(records_b, label_b));
  return c;
}

std::string ControllerComparison::to_text() const {
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof(line), "%-16s | %-24s | %-24s | %s\n", "controller",
                "closest distance [m]", "maximum force [N]", "epochs");
  out << line;
  out << std::string(80, '-') << "\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-16s | %10.4f +/- %-10.4f | %10.4f +/- %-10.4f | %d\n",
                  r.label.c_str(), r.mean_min_distance, r.std_min_distance, r.mean_max_force,
                  r.std_max_force, r.epochs);
    out << line;
  }
  return out.str();
}

std::string ControllerComparison::to_csv() const {
  std::ostringstream out;
  out << "controller,mean_min_distance,std_min_distance,mean_max_force,std_max_force,epochs\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%.17g,%.17g,%d\n", r.label.c_str(),
                  r.mean_min_distance, r.std_min_distance, r.mean_max_force, r.std_max_force,
                  r.epochs);
    out << line;
  }
  return out.str();
}

std::string passivity_map_csv(const Vec& f, const Mat& damping, double extent, int resolution) {
  std::ostringstream out;
  out << "vx,vy,dissipation\n";
  char line[128];
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      Vec v = Vec::Zero(f.size());
      v[0] = -extent + 2.0 * extent * i / (resolution - 1);
      v[1] = -extent + 2.0 * extent * j / (resolution - 1);
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", v[0], v[1],
                    dissipation(v, f, damping));
      out << line;
    }
  }
  return out.str();
}

}  // namespace oadc
