#include "oadc/controller.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oadc {

namespace {

constexpr double kDegenerateSpeed = 1e-6;  // m/s, onset of the attractor fallback
constexpr double kAlignmentEps = 1e-9;

// Flow-aligned basis with the frozen-basis fallback: while the desired
// velocity is above the degeneracy threshold the basis follows it (and is
// remembered); below, the last remembered basis is reused so the damping
// stays continuous through the attractor.
Mat follow_basis(const Vec& f, ControllerContext* ctx) {
  const double speed = f.norm();
  if (speed >= kDegenerateSpeed || (speed >= 1e-15 && (ctx == nullptr || !ctx->last_follow_basis))) {
    Mat q = orthonormal_completion(Vec(f / speed));
    if (ctx != nullptr && speed >= kDegenerateSpeed) ctx->last_follow_basis = q;
    return q;
  }
  if (ctx != nullptr && ctx->last_follow_basis) return *ctx->last_follow_basis;
  return Mat::Identity(f.size(), f.size());
}

// Blend factor of the attractor fallback: 1 keeps the nominal values,
// 0 selects uniform s_follow.
double degeneracy_ramp(const Vec& f) {
  return std::clamp(f.norm() / kDegenerateSpeed, 0.0, 1.0);
}

}  // namespace

void DampingSpec::validate() const {
  if (s_obs <= 0.0 || s_follow <= 0.0 || s_compliant <= 0.0) {
    throw ConfigError("damping values must be strictly positive");
  }
  if (gamma_crit <= 1.0) throw ConfigError("gamma_crit must be > 1");
}

DampingSpec DampingSpec::recommended(double min_mass_eigenvalue, double dt, double gamma_crit) {
  DampingSpec spec;
  spec.s_obs = 2.0 * min_mass_eigenvalue / dt;
  spec.s_follow = 1.0 * min_mass_eigenvalue / dt;
  spec.s_compliant = 0.1 * min_mass_eigenvalue / dt;
  spec.gamma_crit = gamma_crit;
  return spec;
}

PlantModel PlantModel::point_mass(int dim, double mass_value) {
  PlantModel p;
  p.mass = Mat::Identity(dim, dim) * mass_value;
  p.gravity = Vec::Zero(dim);
  return p;
}

void PlantModel::validate() const {
  if (mass.rows() != mass.cols() || mass.rows() == 0) throw ConfigError("mass matrix must be square");
  if ((mass - mass.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("mass matrix must be symmetric");
  }
  if (min_mass_eigenvalue() <= 0.0) throw ConfigError("mass matrix must be positive definite");
  if (gravity.size() != mass.rows()) throw ConfigError("gravity dimension mismatch");
}

double PlantModel::min_mass_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Mat>(mass).eigenvalues().minCoeff();
}

DampingDecomposition damping_follow(const Vec& f, const DampingSpec& spec,
                                    const DangerAssessment& danger, ControllerContext* ctx) {
  const Eigen::Index n = f.size();

  const double delta_gamma =
      std::max((spec.gamma_crit - danger.gamma_min) / (spec.gamma_crit - 1.0), 0.0);
  const double normal_sq = danger.averaged_normal.size() > 0 ? danger.averaged_normal.squaredNorm() : 0.0;
  const double w_p = std::min(1.0, normal_sq + delta_gamma * delta_gamma);

  Vec values = Vec::Constant(n, w_p * spec.s_obs + (1.0 - w_p) * spec.s_compliant);
  values[0] = w_p * spec.s_obs + (1.0 - w_p) * spec.s_follow;

  const double ramp = degeneracy_ramp(f);
  if (ramp < 1.0) {
    values = ramp * values + (1.0 - ramp) * Vec::Constant(n, spec.s_follow);
  }
  return {follow_basis(f, ctx), values};
}

DampingDecomposition damping_obstacle(const Vec& f, const Vec& xi_dot, const DampingSpec& spec,
                                      const DangerAssessment& danger, ControllerContext* ctx) {
  const Eigen::Index n = f.size();
  const double normal_norm = danger.averaged_normal.norm();
  if (normal_norm < 1e-12) {
    throw DegenerateNormalError("obstacle damping needs a nonvanishing averaged normal");
  }

  const Vec q1 = danger.averaged_normal / normal_norm;
  const Vec q1_follow = follow_basis(f, ctx).col(0);
  const double p = std::clamp(q1.dot(q1_follow), -1.0, 1.0);

  Mat partial(n, 2);
  partial.col(0) = q1;
  if (std::abs(p) < 1.0 - kAlignmentEps) {
    partial.col(1) = (q1_follow - p * q1).normalized();
  } else {
    partial.col(1) = orthonormal_completion(q1).col(1);
  }
  Mat basis = orthonormal_completion(partial);

  Vec values = Vec::Constant(n, spec.s_compliant);
  const bool toward_obstacle = (f - xi_dot).dot(danger.averaged_normal) > 0.0;
  values[0] = toward_obstacle ? spec.s_obs : spec.s_compliant;
  values[1] = std::abs(p) * spec.s_compliant + (1.0 - std::abs(p)) * spec.s_follow;
  return {basis, values};
}

DampingDecomposition damping_baseline(const Vec& f, const DampingSpec& spec,
                                      ControllerContext* ctx) {
  const Eigen::Index n = f.size();
  Vec values = Vec::Constant(n, spec.s_compliant);
  values[0] = spec.s_follow;

  const double ramp = degeneracy_ramp(f);
  if (ramp < 1.0) {
    values = ramp * values + (1.0 - ramp) * Vec::Constant(n, spec.s_follow);
  }
  return {follow_basis(f, ctx), values};
}

Mat damping_combined(const Environment& env, const BaseField& field, const DampingSpec& spec,
                     const Vec& xi, const Vec& xi_dot, ControllerContext* ctx) {
  const DangerAssessment danger = assess(env, xi, spec.gamma_crit);
  const Vec f = modulate(env, field, xi);

  const Mat d_follow = damping_follow(f, spec, danger, ctx).matrix();
  if (danger.weight <= 0.0) return d_follow;
  const Mat d_obstacle = damping_obstacle(f, xi_dot, spec, danger, ctx).matrix();
  return (1.0 - danger.weight) * d_follow + danger.weight * d_obstacle;
}

Vec control_force(const PlantModel& plant, const Mat& damping, const Vec& f, const Vec& xi_dot) {
  return plant.gravity + damping * (f - xi_dot);
}

ControlEval evaluate_control(const Environment& env, const BaseField& field, bool modulated,
                             ControllerKind kind, const DampingSpec& spec, const PlantModel& plant,
                             const Vec& xi, const Vec& xi_dot, ControllerContext* ctx) {
  ControlEval eval;
  eval.desired_velocity =
      modulated ? modulate_permissive(env, field, xi) : base_velocity(field, xi);
  eval.danger = assess_permissive(env, xi, spec.gamma_crit);

  if (kind == ControllerKind::VelocityPreserving) {
    eval.damping = damping_baseline(eval.desired_velocity, spec, ctx).matrix();
  } else {
    const Mat d_follow = damping_follow(eval.desired_velocity, spec, eval.danger, ctx).matrix();
    if (eval.danger.weight > 0.0) {
      const Mat d_obstacle =
          damping_obstacle(eval.desired_velocity, xi_dot, spec, eval.danger, ctx).matrix();
      eval.damping = (1.0 - eval.danger.weight) * d_follow + eval.danger.weight * d_obstacle;
    } else {
      eval.damping = d_follow;
    }
  }
  eval.force = control_force(plant, eval.damping, eval.desired_velocity, xi_dot);
  return eval;
}

}  // namespace oadc
