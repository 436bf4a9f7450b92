#include "oadc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Dense>

namespace oadc {

void DisturbanceSchedule::validate(double dt) const {
  for (size_t i = 0; i < impulses.size(); ++i) {
    if (impulses[i].duration < dt - 1e-12) {
      throw ConfigError("impulse duration must cover at least one step");
    }
    for (size_t j = i + 1; j < impulses.size(); ++j) {
      const double a0 = impulses[i].start, a1 = a0 + impulses[i].duration;
      const double b0 = impulses[j].start, b1 = b0 + impulses[j].duration;
      if (a0 < b1 && b0 < a1) throw ConfigError("impulse windows must not overlap");
    }
  }
}

Vec DisturbanceSchedule::force_at(double t, int dim) const {
  for (const auto& imp : impulses) {
    if (t >= imp.start && t < imp.start + imp.duration) return imp.force;
  }
  return Vec::Zero(dim);
}

double GaussianSampler::uniform01() {
  // 53-bit mantissa draw in (0, 1]; keeps log() finite below.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double GaussianSampler::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

void SimConfig::validate() const {
  env.validate();
  damping.validate();
  plant.validate();
  if (dt <= 0.0) throw ConfigError("dt must be > 0");
  if (horizon <= dt) throw ConfigError("horizon must exceed dt");
  const int n = dim();
  if (n == 0) throw ConfigError("start position must be non-empty");
  if (start_velocity.size() != n) throw ConfigError("start velocity dimension mismatch");
  if (plant.mass.rows() != n) throw ConfigError("mass matrix dimension mismatch");
  if (!env.obstacles.empty() && env.dim() != n) throw ConfigError("scene dimension mismatch");
  if (noise.velocity_std < 0.0 || noise.position_std < 0.0) {
    throw ConfigError("noise standard deviations must be >= 0");
  }
  disturbances.validate(dt);
  for (const auto& imp : disturbances.impulses) {
    if (imp.force.size() != n) throw ConfigError("impulse force dimension mismatch");
  }
}

namespace {

Vec with_noise(const Vec& value, double std_dev, GaussianSampler& sampler) {
  if (std_dev <= 0.0) return value;
  Vec noisy = value;
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy[i] += std_dev * sampler();
  return noisy;
}

void fill_row(StepRow& row, const PlantState& state, const ControlEval& eval, const Vec& tau_e,
              const SimConfig& config) {
  row.t = state.t;
  row.xi = state.xi;
  row.xi_dot = state.xi_dot;
  row.tau_c = eval.force;
  row.tau_e = tau_e;
  row.gamma_min = eval.danger.gamma_min;
  row.weight = eval.danger.weight;
  row.signed_distance = signed_distance(config.env, state.xi);
}

}  // namespace

bool step(PlantState& state, const SimConfig& config, GaussianSampler& sampler,
          ControllerContext& ctx, StepRow* row) {
  const Vec measured_xi = with_noise(state.xi, config.noise.position_std, sampler);
  const Vec measured_xi_dot = with_noise(state.xi_dot, config.noise.velocity_std, sampler);

  const ControlEval eval =
      evaluate_control(config.env, config.field, config.modulated, config.controller,
                       config.damping, config.plant, measured_xi, measured_xi_dot, &ctx);
  const Vec tau_e = config.disturbances.force_at(state.t, config.dim());

  if (row != nullptr) fill_row(*row, state, eval, tau_e, config);

  const Vec accel = config.plant.mass.ldlt().solve(eval.force + tau_e);
  state.xi += config.dt * state.xi_dot;
  state.xi_dot += config.dt * accel;
  state.t += config.dt;
  // Blow-up guard: beyond 1e100 the geometry queries overflow long before
  // the components themselves reach infinity.
  constexpr double kBlowUp = 1e100;
  return state.xi.allFinite() && state.xi_dot.allFinite() &&
         state.xi.cwiseAbs().maxCoeff() < kBlowUp && state.xi_dot.cwiseAbs().maxCoeff() < kBlowUp;
}

TrajectoryRecord run(const SimConfig& config) {
  config.validate();

  TrajectoryRecord record;
  const int steps = static_cast<int>(std::ceil(config.horizon / config.dt - 1e-9));
  record.rows.reserve(steps + 1);

  GaussianSampler sampler(config.noise.seed);
  ControllerContext ctx;
  PlantState state{config.start_position, config.start_velocity, 0.0};

  bool finite = true;
  for (int k = 0; k < steps && finite; ++k) {
    StepRow row;
    finite = step(state, config, sampler, ctx, &row);
    record.rows.push_back(std::move(row));
    if (!finite) {
      record.metrics.diverged = true;
      record.metrics.divergence_step = k + 1;
    }
  }
  if (finite) {
    // Closing row: log the final state with the forces that would act on it.
    const ControlEval eval =
        evaluate_control(config.env, config.field, config.modulated, config.controller,
                         config.damping, config.plant, state.xi, state.xi_dot, &ctx);
    StepRow row;
    fill_row(row, state, eval, config.disturbances.force_at(state.t, config.dim()), config);
    record.rows.push_back(std::move(row));
  }

  for (const auto& row : record.rows) {
    record.metrics.min_signed_distance =
        std::min(record.metrics.min_signed_distance, row.signed_distance);
    record.metrics.max_control_force =
        std::max(record.metrics.max_control_force, row.tau_c.norm());
  }
  return record;
}

std::vector<RunMetrics> run_epochs(const SimConfig& config, int epochs, double noise_level,
                                   NoiseKind kind) {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");

  std::vector<SimConfig> configs(epochs, config);
  for (int e = 0; e < epochs; ++e) {
    auto& c = configs[e];
    (kind == NoiseKind::Velocity ? c.noise.velocity_std : c.noise.position_std) = noise_level;
    c.noise.seed = config.noise.seed + static_cast<std::uint64_t>(e);
  }

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunMetrics> metrics(epochs);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int e = next.fetch_add(1); e < epochs; e = next.fetch_add(1)) {
      metrics[e] = run(configs[e]).metrics;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < std::min<unsigned>(workers, epochs); ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return metrics;
}

EpochStats summarize(const std::vector<RunMetrics>& metrics, double noise_level) {
  EpochStats stats;
  stats.noise_level = noise_level;
  stats.epochs = static_cast<int>(metrics.size());

  auto mean_std = [&](auto getter) {
    double mean = 0.0;
    for (const auto& m : metrics) mean += getter(m);
    mean /= metrics.size();
    double var = 0.0;
    if (metrics.size() > 1) {
      for (const auto& m : metrics) {
        const double value = getter(m);
        const double d = value == mean ? 0.0 : value - mean;  // inf-safe
        var += d * d;
      }
      var /= (metrics.size() - 1);  // sample standard deviation
    }
    return std::pair<double, double>(mean, std::sqrt(var));
  };

  std::tie(stats.mean_min_distance, stats.std_min_distance) =
      mean_std([](const RunMetrics& m) { return m.min_signed_distance; });
  std::tie(stats.mean_max_force, stats.std_max_force) =
      mean_std([](const RunMetrics& m) { return m.max_control_force; });
  for (const auto& m : metrics) stats.diverged_runs += m.diverged ? 1 : 0;
  return stats;
}

std::vector<EpochStats> monte_carlo(const SimConfig& config, int epochs,
                                    const std::vector<double>& noise_levels, NoiseKind kind) {
  std::vector<EpochStats> out;
  out.reserve(noise_levels.size());
  for (const double level : noise_levels) {
    out.push_back(summarize(run_epochs(config, epochs, level, kind), level));
  }
  return out;
}

}  // namespace oadc
