#pragma once

#include <string>
#include <vector>

#include "oadc/controller.hpp"
#include "oadc/simulator.hpp"

namespace oadc {

/// Instantaneous dissipated power xi_dot^T D (xi_dot - f). Positive means
/// the controller removes kinetic energy; the system is passive wherever
/// this is nonnegative.
double dissipation(const Vec& xi_dot, const Vec& f, const Mat& damping);

/// Boundary of the possibly-non-passive velocity region: an ellipsoid
/// centered at f/2 whose axes point along the damping eigenvectors. For
/// D = s*I it is the circle of radius ||f||/2 (Thale geometry); in general
/// it is the image of that circle under Q S^-1/2 applied in the scaled
/// coordinates v = sqrt(S) Q^T xi_dot.
struct PassivityBoundary {
  Vec center;
  Vec semi_axes;  // per-axis lengths; all zero when f = 0
  Mat axes;       // columns = axis directions

  /// Points on the boundary (dissipation == 0), sampled on the great
  /// circle spanned by the first two scaled coordinates.
  std::vector<Vec> sample(int count) const;

  Mat basis_q;  // kept for sampling
  Vec values_s;
  Vec f;
};

PassivityBoundary passivity_boundary(const Vec& f, const Mat& basis_q, const Vec& values_s);
PassivityBoundary passivity_boundary(const Vec& f, const Mat& damping);

/// Largest stable uniform damping of the explicit-Euler loop:
/// 2 * min(eig(M)) / dt.
double discrete_damping_limit(const Mat& mass, double dt);

/// Collision-avoidance bound for the flat-wall scenario: impact speeds
/// below s_follow * distance / m cannot reach the surface, and the
/// inward displacement stays below ||v_I|| * m / s_follow.
struct ImpulseBound {
  double max_impact_speed = 0.0;

  double displacement_bound(double impact_speed) const { return impact_speed / rate; }
  double rate = 1.0;  // s_follow / m
};

ImpulseBound collision_impulse_bound(const DampingSpec& spec, double mass, double distance);

/// Aggregate comparison of two controllers over matched epochs.
struct ControllerStats {
  std::string label;
  double mean_min_distance = 0.0;
  double std_min_distance = 0.0;
  double mean_max_force = 0.0;
  double std_max_force = 0.0;
  int epochs = 0;
};

struct ControllerComparison {
  std::vector<ControllerStats> rows;

  std::string to_text() const;
  std::string to_csv() const;
};

ControllerComparison compare_controllers(const std::vector<RunMetrics>& records_a,
                                         const std::vector<RunMetrics>& records_b,
                                         const std::string& label_a = "obstacle_aware",
                                         const std::string& label_b = "baseline");

/// CSV dump (vx, vy, dissipation) on a velocity-space grid, plot-ready.
std::string passivity_map_csv(const Vec& f, const Mat& damping, double extent, int resolution);

}  // namespace oadc
