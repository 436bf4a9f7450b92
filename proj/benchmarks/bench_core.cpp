#include <benchmark/benchmark.h>

#include <random>

#include "oadc/controller.hpp"
#include "oadc/flowfield.hpp"
#include "oadc/simulator.hpp"

namespace {

using oadc::Vec;

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

oadc::Environment passage_scene() {
  oadc::Environment env;
  env.obstacles.push_back(oadc::Obstacle::box(v2(0, 0.85), v2(1.8, 0.45), 0.2));
  env.obstacles.push_back(oadc::Obstacle::box(v2(0, -0.85), v2(1.8, 0.45), 0.2));
  env.obstacles.push_back(oadc::Obstacle::sphere(v2(2.5, 0.5), 0.4, 0.1));
  return env;
}

std::vector<Vec> exterior_points(const oadc::Environment& env, int count) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<Vec> points;
  while (static_cast<int>(points.size()) < count) {
    Vec p = v2(u(rng), u(rng));
    bool ok = true;
    for (const auto& o : env.obstacles) ok = ok && o.surface_offset(p) > 1e-3;
    if (ok) points.push_back(p);
  }
  return points;
}

void gamma_sphere(benchmark::State& state) {
  const auto sphere = oadc::Obstacle::sphere(v2(0, 0), 1.0, 0.1);
  const auto points = exterior_points(oadc::Environment{{sphere}}, 256);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oadc::gamma(sphere, points[i++ % points.size()]));
  }
}
BENCHMARK(gamma_sphere);

void gamma_box(benchmark::State& state) {
  const auto box = oadc::Obstacle::box(v2(0, 0), v2(1.8, 0.45), 0.2);
  const auto points = exterior_points(oadc::Environment{{box}}, 256);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oadc::gamma(box, points[i++ % points.size()]));
  }
}
BENCHMARK(gamma_box);

void assess_scene(benchmark::State& state) {
  const auto env = passage_scene();
  const auto points = exterior_points(env, 256);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oadc::assess(env, points[i++ % points.size()], 3.0));
  }
}
BENCHMARK(assess_scene);

void modulate_scene(benchmark::State& state) {
  const auto env = passage_scene();
  const auto field = oadc::BaseField::linear_attractor(v2(2.5, -1.0), 1.0);
  const auto points = exterior_points(env, 256);
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oadc::modulate(env, field, points[i++ % points.size()]));
  }
}
BENCHMARK(modulate_scene);

void damping_combined_scene(benchmark::State& state) {
  const auto env = passage_scene();
  const auto field = oadc::BaseField::linear_attractor(v2(2.5, -1.0), 1.0);
  const oadc::DampingSpec spec{50.0, 40.0, 5.0, 3.0};
  const auto points = exterior_points(env, 256);
  oadc::ControllerContext ctx;
  size_t i = 0;
  for (auto _ : state) {
    const Vec& p = points[i++ % points.size()];
    benchmark::DoNotOptimize(oadc::damping_combined(env, field, spec, p, v2(0.5, -0.1), &ctx));
  }
}
BENCHMARK(damping_combined_scene);

void simulator_step(benchmark::State& state) {
  oadc::SimConfig sim;
  sim.env = passage_scene();
  sim.field = oadc::BaseField::linear_attractor(v2(2.5, -1.0), 1.0);
  sim.controller = oadc::ControllerKind::ObstacleAware;
  sim.damping = {50.0, 40.0, 5.0, 3.0};
  sim.plant = oadc::PlantModel::point_mass(2);
  sim.dt = 0.01;
  sim.horizon = 1e9;
  sim.start_position = v2(-2.5, 1.0);
  sim.start_velocity = v2(0, 0);
  sim.noise.velocity_std = 0.1;
  oadc::GaussianSampler sampler(1);
  oadc::ControllerContext ctx;
  oadc::PlantState plant_state{sim.start_position, sim.start_velocity, 0.0};
  for (auto _ : state) {
    if (!oadc::step(plant_state, sim, sampler, ctx)) {
      plant_state = {sim.start_position, sim.start_velocity, 0.0};
    }
    if ((plant_state.xi - v2(2.5, -1.0)).norm() < 0.05) {
      plant_state = {sim.start_position, sim.start_velocity, 0.0};
    }
  }
}
BENCHMARK(simulator_step);

}  // namespace

BENCHMARK_MAIN();
