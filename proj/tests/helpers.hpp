#pragma once

#include <random>

#include "oadc/geometry.hpp"

namespace oadc::test {

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// Uniform point in [-extent, extent]^dim.
inline Vec random_point(std::mt19937& rng, int dim, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

inline Vec random_unit(std::mt19937& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

// Rejection-samples a point exterior to every obstacle.
inline Vec random_exterior(std::mt19937& rng, const Environment& env, int dim, double extent,
                           double min_offset = 1e-6) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec p = random_point(rng, dim, extent);
    bool ok = true;
    for (const auto& o : env.obstacles) {
      if (o.surface_offset(p) < min_offset) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  throw std::runtime_error("could not sample an exterior point");
}

}  // namespace oadc::test
