#pragma once

#include <optional>

#include "oadc/flowfield.hpp"
#include "oadc/geometry.hpp"

namespace oadc {

/// User damping parameters, all in 1/s. Recommended ordering
/// s_obs >= s_follow >> s_compliant > 0.
struct DampingSpec {
  double s_obs = 0.0;
  double s_follow = 0.0;
  double s_compliant = 0.0;
  double gamma_crit = 3.0;

  void validate() const;

  /// Defaults derived from the plant: 2.0 * m / dt toward obstacles,
  /// 1.0 * m / dt along the flow, 0.1 * m / dt elsewhere, with m the
  /// smallest mass eigenvalue. Saturates the discrete stability limit.
  static DampingSpec recommended(double min_mass_eigenvalue, double dt,
                                 double gamma_crit = 3.0);
};

/// Damping matrix in factored form D = Q diag(S) Q^T with orthonormal Q.
struct DampingDecomposition {
  Mat basis;
  Vec values;

  Mat matrix() const { return basis * values.asDiagonal() * basis.transpose(); }
};

/// Point-mass plant: SPD mass matrix, zero Coriolis, optional constant
/// gravity force hook (zero by default).
struct PlantModel {
  Mat mass;
  Vec gravity;

  static PlantModel point_mass(int dim, double mass_value = 1.0);
  void validate() const;
  double min_mass_eigenvalue() const;
};

enum class ControllerKind { VelocityPreserving, ObstacleAware };

/// Per-simulation scratch state: the last well-defined flow-aligned basis,
/// reused while the desired velocity degenerates near the attractor.
/// Owned by exactly one simulation at a time.
struct ControllerContext {
  std::optional<Mat> last_follow_basis;
};

/// Velocity-preserving damping: first basis vector along the desired
/// velocity; stiff along the flow, compliant elsewhere, plus the narrow
/// passage term w_p that raises all values toward s_obs when the averaged
/// normal cancels while the distance value stays low.
DampingDecomposition damping_follow(const Vec& f, const DampingSpec& spec,
                                    const DangerAssessment& danger,
                                    ControllerContext* ctx = nullptr);

/// Obstacle-aligned damping: first basis vector along the averaged normal
/// (stiff toward the obstacle unless the tracking error points away from
/// it), second as close to the desired velocity as orthonormality allows.
/// Requires a nonvanishing averaged normal.
DampingDecomposition damping_obstacle(const Vec& f, const Vec& xi_dot, const DampingSpec& spec,
                                      const DangerAssessment& danger,
                                      ControllerContext* ctx = nullptr);

/// Baseline damping of the velocity-preserving controller without the
/// narrow-passage term: values (s_follow, s_compliant, ...).
DampingDecomposition damping_baseline(const Vec& f, const DampingSpec& spec,
                                      ControllerContext* ctx = nullptr);

/// Blended obstacle-aware damping (1 - w) D_follow + w D_obstacle for the
/// scene at (xi, xi_dot). Symmetric positive definite.
Mat damping_combined(const Environment& env, const BaseField& field, const DampingSpec& spec,
                     const Vec& xi, const Vec& xi_dot, ControllerContext* ctx = nullptr);

/// Passive control force g + D (f - xi_dot).
Vec control_force(const PlantModel& plant, const Mat& damping, const Vec& f, const Vec& xi_dot);

/// One full controller evaluation at a (possibly noisy) measured state.
struct ControlEval {
  Vec desired_velocity;
  Mat damping;
  Vec force;
  DangerAssessment danger;
};

/// Evaluates desired velocity, damping and control force for either
/// controller kind. Obstacles containing the query point are skipped so
/// collided simulation states remain measurable.
ControlEval evaluate_control(const Environment& env, const BaseField& field, bool modulated,
                             ControllerKind kind, const DampingSpec& spec,
                             const PlantModel& plant, const Vec& xi, const Vec& xi_dot,
                             ControllerContext* ctx = nullptr);

}  // namespace oadc
