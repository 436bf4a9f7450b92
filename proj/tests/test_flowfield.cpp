#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oadc/flowfield.hpp"

using namespace oadc;
using namespace oadc::test;

TEST_CASE("base velocity of the linear attractor is capped and vanishes at the goal") {
  const auto field = BaseField::linear_attractor(v2(2.5, -1.0), 1.0);
  CHECK(base_velocity(field, v2(2.5, -1.0)).norm() == 0.0);

  const Vec far = base_velocity(field, v2(-2.5, 1.0));
  CHECK(far.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(far.normalized().dot((v2(2.5, -1.0) - v2(-2.5, 1.0)).normalized()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // Inside the cap radius the field is exactly the attractor error.
  CHECK((base_velocity(field, v2(2.0, -1.0)) - v2(0.5, 0)).norm() < 1e-15);
}

TEST_CASE("constant field ignores the state") {
  const auto field = BaseField::constant(v2(1, 0), 1.0);
  CHECK((base_velocity(field, v2(9, -3)) - v2(1, 0)).norm() == 0.0);
  CHECK((base_velocity(field, v2(0, 0)) - v2(1, 0)).norm() == 0.0);
}

TEST_CASE("rotated linear field turns the attractor error") {
  const auto field = BaseField::rotated_linear(v2(0, 0), M_PI / 2.0, 10.0);
  const Vec v = base_velocity(field, v2(-1, 0));  // error (1,0) rotated 90 degrees
  CHECK((v - v2(0, 1)).norm() < 1e-12);
}

TEST_CASE("modulation eigenvalues follow 1 -/+ 1/gamma") {
  CHECK(modulation_eigenvalues(1.0) == std::pair{0.0, 2.0});
  CHECK(modulation_eigenvalues(2.0) == std::pair{0.5, 1.5});
  const auto [lr, le] = modulation_eigenvalues(1e9);
  CHECK(lr == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(le == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(modulation_eigenvalues(0.5), DomainError);
}

TEST_CASE("modulate is the identity without obstacles") {
  const auto field = BaseField::linear_attractor(v2(1, 1), 2.0);
  Environment env;
  const Vec p = v2(-3, 0.5);
  CHECK((modulate(env, field, p) - base_velocity(field, p)).norm() == 0.0);
}

TEST_CASE("tangent flow at gamma 2 is stretched by exactly 3/2") {
  // One unit sphere at the origin, query at (0,2), base flow (1,0): the
  // reference direction is (0,1), the tangent is (1,0), so the modulated
  // velocity is lambda_e * (1,0) with lambda_e = 1.5.
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0)}};
  const auto field = BaseField::constant(v2(1, 0), 1.0);
  const Vec f = modulate(env, field, v2(0, 2));
  CHECK((f - v2(1.5, 0)).norm() < 1e-12);
}

TEST_CASE("head-on flow dies at the surface") {
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0)}};
  const auto field = BaseField::constant(v2(0, -1), 1.0);  // straight at the obstacle
  const Vec p = v2(0, 1.0 + 1e-9);
  const Vec f = modulate(env, field, p);
  const Vec n = surface_normal(env.obstacles[0], p);
  CHECK(std::abs(f.dot(n)) < 1e-6);
}

TEST_CASE("impenetrability near the surface") {
  // The modulation leaves f . n = lambda_r * (f_base . n): the inward
  // component shrinks like 1 - 1/gamma and vanishes on the surface, which
  // is what keeps trajectories outside.
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0)}};
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> gap(1e-6, 0.05);
  for (int i = 0; i < 1000; ++i) {
    const Vec dir = random_unit(rng, 2);
    const double gamma_value = 1.0 + gap(rng);  // gamma < 1.05
    const Vec p = dir * gamma_value;
    const auto field = BaseField::constant(random_unit(rng, 2), 1.0);
    const Vec f = modulate(env, field, p);
    const Vec n = surface_normal(env.obstacles[0], p);
    const Vec base = base_velocity(field, p);
    const double lambda_r = 1.0 - 1.0 / gamma_value;
    // Exact identity: the inward component is the slowed base component.
    CHECK(f.dot(n) == doctest::Approx(lambda_r * base.dot(n)).epsilon(1e-9));
    // Never more inward than the vanishing bound allows.
    CHECK(f.dot(n) >= -lambda_r * base.norm() - 1e-12);
    // Outward or tangent base flow is never turned inward.
    if (base.dot(n) >= 0.0) CHECK(f.dot(n) >= -1e-12);
  }
  // At the surface the normal component is gone entirely.
  for (int i = 0; i < 100; ++i) {
    const Vec dir = random_unit(rng, 2);
    const Vec p = dir * (1.0 + 1e-7);
    const auto field = BaseField::constant(random_unit(rng, 2), 1.0);
    const Vec f = modulate(env, field, p);
    const Vec n = surface_normal(env.obstacles[0], p);
    CHECK(std::abs(f.dot(n)) <= 1e-6 * std::max(1.0, f.norm()));
  }
}

TEST_CASE("modulated field is numerically continuous away from surfaces") {
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0), Obstacle::box(v2(2.5, 1), v2(0.5, 0.5), 0.2)}};
  const auto field = BaseField::linear_attractor(v2(4, -2), 1.0);
  std::mt19937 rng(22);
  const double delta = 1e-6;
  for (int i = 0; i < 300; ++i) {
    const Vec p = random_exterior(rng, env, 2, 5.0, 0.05);
    if ((p - env.obstacles[0].reference_point).norm() < 0.1) continue;
    const Vec f0 = modulate(env, field, p);
    const Vec f1 = modulate(env, field, p + delta * random_unit(rng, 2));
    CHECK((f1 - f0).norm() <= 100.0 * delta);  // generous Lipschitz budget
  }
}

TEST_CASE("modulation magnitude stays below twice the cap on sphere scenes") {
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0), Obstacle::sphere(v2(3, 0.5), 0.7, 0.2)}};
  const auto field = BaseField::linear_attractor(v2(5, 0), 1.0);
  std::mt19937 rng(23);
  for (int i = 0; i < 2000; ++i) {
    const Vec p = random_exterior(rng, env, 2, 6.0);
    CHECK(modulate(env, field, p).norm() <= 2.0 + 1e-9);
  }
}

TEST_CASE("far field modulation is nearly the base field") {
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0)}};
  const auto field = BaseField::constant(v2(0.6, -0.8), 1.0);
  std::mt19937 rng(24);
  for (int i = 0; i < 50; ++i) {
    const Vec p = random_unit(rng, 2) * 150.0;  // gamma > 100
    const Vec f = modulate(env, field, p);
    const Vec base = base_velocity(field, p);
    CHECK((f - base).norm() <= 0.03 * base.norm());
  }
}

TEST_CASE("multi-obstacle combination reduces to the single-obstacle case") {
  Environment one{{Obstacle::sphere(v2(0, 0), 1.0)}};
  Environment two{{Obstacle::sphere(v2(0, 0), 1.0), Obstacle::sphere(v2(40, 0), 1.0)}};
  const auto field = BaseField::linear_attractor(v2(3, 2), 1.0);
  const Vec p = v2(0, 1.4);
  // The far obstacle carries a tiny weight; the result must stay close.
  CHECK((modulate(one, field, p) - modulate(two, field, p)).norm() < 0.05);
}

TEST_CASE("interior query points are rejected") {
  Environment env{{Obstacle::sphere(v2(0, 0), 1.0)}};
  const auto field = BaseField::constant(v2(1, 0), 1.0);
  CHECK_THROWS_AS(modulate(env, field, v2(0.2, 0)), InteriorPointError);
  CHECK((modulate_permissive(env, field, v2(0.2, 0)) - v2(1, 0)).norm() == 0.0);
}

TEST_CASE("modulation works in three dimensions") {
  Environment env{{Obstacle::sphere(v3(0, 0, 0), 1.0)}};
  const auto field = BaseField::constant(v3(1, 0, 0), 1.0);
  const Vec f = modulate(env, field, v3(0, 0, 2));  // tangent flow at gamma 2
  CHECK((f - v3(1.5, 0, 0)).norm() < 1e-12);
  // Impenetrability near the pole.
  const Vec p = v3(0, 0, 1.0 + 1e-6);
  const auto inward = BaseField::constant(v3(0, 0, -1), 1.0);
  const Vec n = surface_normal(env.obstacles[0], p);
  CHECK(modulate(env, inward, p).dot(n) >= -1e-6);
}
