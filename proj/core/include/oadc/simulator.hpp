#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oadc/controller.hpp"

namespace oadc {

struct PlantState {
  Vec xi;
  Vec xi_dot;
  double t = 0.0;
};

struct Impulse {
  double start = 0.0;
  double duration = 0.0;
  Vec force;
};

/// Scripted external force: a list of non-overlapping constant-force
/// windows. An impulse of duration dt and force m*v/dt imparts the impact
/// velocity v.
struct DisturbanceSchedule {
  std::vector<Impulse> impulses;

  void validate(double dt) const;
  Vec force_at(double t, int dim) const;
};

/// Zero-mean Gaussian measurement noise applied to the controller's input
/// only; the true plant state stays untouched.
struct NoiseSpec {
  double velocity_std = 0.0;  // m/s
  double position_std = 0.0;  // m
  std::uint64_t seed = 0;
};

/// Gaussian sampling via the Box-Muller transform over a seeded
/// std::mt19937_64. Both pieces are fully specified by the C++ standard,
/// so streams are reproducible across platforms and compilers.
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()();

private:
  double uniform01();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct StepRow {
  double t = 0.0;
  Vec xi;
  Vec xi_dot;
  Vec tau_c;
  Vec tau_e;
  double gamma_min = 0.0;
  double weight = 0.0;
  double signed_distance = 0.0;
};

struct RunMetrics {
  double min_signed_distance = std::numeric_limits<double>::infinity();
  double max_control_force = 0.0;
  bool diverged = false;
  int divergence_step = -1;
};

struct TrajectoryRecord {
  std::vector<StepRow> rows;
  RunMetrics metrics;
};

struct SimConfig {
  Environment env;
  BaseField field;
  bool modulated = true;
  ControllerKind controller = ControllerKind::ObstacleAware;
  DampingSpec damping;
  PlantModel plant;
  double dt = 0.01;
  double horizon = 10.0;
  Vec start_position;
  Vec start_velocity;
  NoiseSpec noise;
  DisturbanceSchedule disturbances;

  int dim() const { return static_cast<int>(start_position.size()); }
  void validate() const;
};

/// One explicit-Euler step: the controller sees the measured (noisy)
/// state, then xi += dt * xi_dot and xi_dot += dt * M^-1 (tau_c + tau_e).
/// Interior states are integrated through, not rejected, so collisions
/// stay measurable. Returns false when the state went non-finite.
bool step(PlantState& state, const SimConfig& config, GaussianSampler& sampler,
          ControllerContext& ctx, StepRow* row = nullptr);

/// Full trajectory from the configured start until the horizon or until
/// the state goes non-finite. Deterministic for a fixed seed.
TrajectoryRecord run(const SimConfig& config);

enum class NoiseKind { Velocity, Position };

struct EpochStats {
  double noise_level = 0.0;
  int epochs = 0;
  double mean_min_distance = 0.0;
  double std_min_distance = 0.0;
  double mean_max_force = 0.0;
  double std_max_force = 0.0;
  int diverged_runs = 0;
};

/// Monte-Carlo sweep over noise levels: per level, `epochs` independent
/// runs seeded seed + epoch index, executed in parallel. Mean and sample
/// (n-1) standard deviation of the per-run metrics.
std::vector<EpochStats> monte_carlo(const SimConfig& config, int epochs,
                                    const std::vector<double>& noise_levels, NoiseKind kind);

/// Per-run metrics of each epoch at one noise level (building block of
/// monte_carlo, exposed for paired controller comparisons).
std::vector<RunMetrics> run_epochs(const SimConfig& config, int epochs, double noise_level,
                                   NoiseKind kind);

EpochStats summarize(const std::vector<RunMetrics>& metrics, double noise_level);

}  // namespace oadc
