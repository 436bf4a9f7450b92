#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oadc/analysis.hpp"

using namespace oadc;
using namespace oadc::test;

TEST_CASE("dissipation arithmetic") {
  const Mat identity = Mat::Identity(2, 2);
  CHECK(dissipation(v2(1, 1), v2(1, 0), identity) == doctest::Approx(1.0));
  CHECK(dissipation(v2(0.5, 0.3), v2(1, 0), identity) == doctest::Approx(-0.16));
  CHECK(dissipation(v2(1, 0), v2(1, 0), identity) == doctest::Approx(0.0));
}

TEST_CASE("Thale circle classifies the non-passive region exactly") {
  std::mt19937 rng(41);
  const Mat identity = Mat::Identity(2, 2);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec f = random_point(rng, 2, 2.0);
    const Vec xi_dot = random_point(rng, 2, 2.5);
    const double margin = (xi_dot - f / 2.0).norm() - f.norm() / 2.0;
    if (std::abs(margin) <= 1e-9) continue;  // on the boundary, undecided
    const bool inside = margin < 0.0;
    const bool non_passive = dissipation(xi_dot, f, identity) < 0.0;
    CHECK(inside == non_passive);
    ++checked;
  }
  CHECK(checked > 9900);
}

TEST_CASE("speeds above the desired velocity are always passive for identity damping") {
  std::mt19937 rng(42);
  const Mat identity = Mat::Identity(2, 2);
  for (int i = 0; i < 10000; ++i) {
    const Vec f = random_point(rng, 2, 1.5);
    Vec xi_dot = random_unit(rng, 2) *
                 (f.norm() + std::uniform_real_distribution<double>(0.0, 2.0)(rng));
    CHECK(dissipation(xi_dot, f, identity) >= -1e-12);
  }
}

TEST_CASE("passivity boundary for identity damping is the half-f circle") {
  const auto boundary = passivity_boundary(v2(1, 0), Mat::Identity(2, 2));
  CHECK((boundary.center - v2(0.5, 0)).norm() < 1e-12);
  CHECK(boundary.semi_axes[0] == doctest::Approx(0.5));
  CHECK(boundary.semi_axes[1] == doctest::Approx(0.5));
}

TEST_CASE("zero field degenerates the boundary to the origin") {
  const auto boundary = passivity_boundary(v2(0, 0), Mat::Identity(2, 2));
  CHECK(boundary.center.norm() == 0.0);
  CHECK(boundary.semi_axes.norm() == 0.0);
  for (const auto& p : boundary.sample(8)) CHECK(p.norm() < 1e-12);
}

TEST_CASE("sampled boundary points are dissipation roots") {
  SUBCASE("axis-aligned anisotropic damping") {
    const Vec s = v2(4, 1);
    const Mat damping = Mat(s.asDiagonal());
    const auto boundary = passivity_boundary(v2(1, 0), Mat::Identity(2, 2), s);
    for (const auto& p : boundary.sample(360)) {
      CHECK(std::abs(dissipation(p, v2(1, 0), damping)) < 1e-9);
    }
  }
  SUBCASE("rotated basis") {
    const double c = std::cos(0.7), sn = std::sin(0.7);
    Mat q(2, 2);
    q << c, -sn, sn, c;
    const Vec s = v2(9, 2);
    const Mat damping = q * s.asDiagonal() * q.transpose();
    const auto boundary = passivity_boundary(v2(0.8, -0.5), q, s);
    for (const auto& p : boundary.sample(360)) {
      CHECK(std::abs(dissipation(p, v2(0.8, -0.5), damping)) < 1e-9);
    }
  }
}

TEST_CASE("the scaled coordinates map the ellipse back onto the circle") {
  const double c = std::cos(-0.4), sn = std::sin(-0.4);
  Mat q(2, 2);
  q << c, -sn, sn, c;
  const Vec s = v2(25, 4);
  const Vec f = v2(1.2, 0.3);
  const auto boundary = passivity_boundary(f, q, s);
  const Vec f_scaled = s.cwiseSqrt().asDiagonal() * (q.transpose() * f);
  for (const auto& p : boundary.sample(180)) {
    const Vec v = s.cwiseSqrt().asDiagonal() * (q.transpose() * p);
    CHECK((v - f_scaled / 2.0).norm() == doctest::Approx(f_scaled.norm() / 2.0).epsilon(1e-9));
  }
}

TEST_CASE("ill-conditioned bases are rejected") {
  Mat q(2, 2);
  q << 1.0, 1.0, 0.0, 1e-9;
  CHECK_THROWS_AS(passivity_boundary(v2(1, 0), q, v2(1, 1)), SingularBasisError);
}

TEST_CASE("discrete damping limit arithmetic") {
  CHECK(discrete_damping_limit(Mat::Identity(2, 2), 0.01) == doctest::Approx(200.0));
  Mat m(2, 2);
  m << 2, 0, 0, 8;
  CHECK(discrete_damping_limit(m, 0.1) == doctest::Approx(40.0));
  CHECK_THROWS_AS(discrete_damping_limit(m, 0.0), DomainError);
}

TEST_CASE("the scalar closed loop is sharp at the damping limit") {
  // Velocity-error multiplier per step is |1 - dt s / m|.
  const double dt = 0.01, m = 1.0;
  auto amplitude_after = [&](double s, int steps) {
    double error = 1.0;
    for (int k = 0; k < steps; ++k) error *= (1.0 - dt * s / m);
    return std::abs(error);
  };
  CHECK(amplitude_after(1.9 * m / dt, 100) < 1.0);   // decays
  CHECK(amplitude_after(2.1 * m / dt, 100) > 1.0);   // grows monotonically
  for (int k = 1; k <= 100; ++k) {
    CHECK(amplitude_after(2.1 * m / dt, k) > amplitude_after(2.1 * m / dt, k - 1));
  }
}

TEST_CASE("impulse bound arithmetic") {
  DampingSpec spec{100.0, 100.0, 100.0, 3.0};
  const auto bound = collision_impulse_bound(spec, 1.0, 0.5);
  CHECK(bound.max_impact_speed == doctest::Approx(50.0));
  CHECK(bound.displacement_bound(50.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(collision_impulse_bound(spec, 1.0, -0.5), DomainError);
}

namespace {

// Flat-wall drop test: agent rides a constant field parallel to a huge box
// and receives an inward impulse; returns the minimum signed distance and
// the largest inward displacement.
std::pair<double, double> wall_drop(double impact_speed, const DampingSpec& spec) {
  SimConfig sim;
  sim.env.obstacles.push_back(Obstacle::box(v2(0, -50), v2(200, 50), 0.0));
  sim.field = BaseField::constant(v2(1, 0), 1.0);
  sim.modulated = false;
  sim.controller = ControllerKind::ObstacleAware;
  sim.damping = spec;
  sim.plant = PlantModel::point_mass(2);
  sim.dt = 1e-4;
  sim.horizon = 1.0;
  sim.start_position = v2(0, 0.5);
  sim.start_velocity = v2(1, 0);
  Impulse imp;
  imp.start = 0.2;
  imp.duration = sim.dt;
  imp.force = v2(0, -impact_speed / sim.dt);
  sim.disturbances.impulses = {imp};
  const auto record = run(sim);
  double lowest = 0.5;
  for (const auto& row : record.rows) lowest = std::min(lowest, row.xi[1]);
  return {record.metrics.min_signed_distance, 0.5 - lowest};
}

}  // namespace

TEST_CASE("impact speeds below the bound never reach the wall") {
  // Uniform damping at s_follow makes the bound sharp.
  const DampingSpec uniform{100.0, 100.0, 100.0, 3.0};
  const auto bound = collision_impulse_bound(uniform, 1.0, 0.5);
  const auto [min_distance, displacement] = wall_drop(0.9 * bound.max_impact_speed, uniform);
  CHECK(min_distance > 0.0);
  CHECK(displacement <= bound.displacement_bound(0.9 * bound.max_impact_speed) * 1.05);
  // The Euler discretization undershoots the continuous bound slightly.
  CHECK(displacement >= bound.displacement_bound(0.9 * bound.max_impact_speed) * 0.8);
}

TEST_CASE("impact speeds well above the bound penetrate under weak damping") {
  const DampingSpec uniform{100.0, 100.0, 100.0, 3.0};
  const auto bound = collision_impulse_bound(uniform, 1.0, 0.5);
  const auto [min_distance, displacement] = wall_drop(1.5 * bound.max_impact_speed, uniform);
  CHECK(min_distance < 0.0);
}

TEST_CASE("controller comparison is reflexive and matches a hand computation") {
  std::vector<RunMetrics> a(3), b(3);
  const double d[3] = {0.10, 0.20, 0.60};
  const double force[3] = {2.0, 4.0, 6.0};
  for (int i = 0; i < 3; ++i) {
    a[i].min_signed_distance = d[i];
    a[i].max_control_force = force[i];
    b[i] = a[i];
  }
  const auto same = compare_controllers(a, b);
  CHECK(same.rows[0].mean_min_distance == same.rows[1].mean_min_distance);
  CHECK(same.rows[0].std_min_distance == same.rows[1].std_min_distance);

  // Spreadsheet oracle: mean 0.3, sample std sqrt(((.2)^2+(.1)^2+(.3)^2)/2).
  CHECK(same.rows[0].mean_min_distance == doctest::Approx(0.3));
  CHECK(same.rows[0].std_min_distance ==
        doctest::Approx(std::sqrt((0.04 + 0.01 + 0.09) / 2.0)));
  CHECK(same.rows[0].mean_max_force == doctest::Approx(4.0));
  CHECK(same.rows[0].std_max_force == doctest::Approx(2.0));

  CHECK_THROWS_AS(compare_controllers(a, std::vector<RunMetrics>(2)), DomainError);
  const std::string csv = same.to_csv();
  CHECK(csv.find("controller,mean_min_distance") == 0);
  CHECK(same.to_text().find("obstacle_aware") != std::string::npos);
}

TEST_CASE("passivity map emits a plot-ready grid") {
  const std::string csv = passivity_map_csv(v2(1, 0), Mat::Identity(2, 2), 1.0, 11);
  CHECK(csv.rfind("vx,vy,dissipation\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 11 * 11);
}
