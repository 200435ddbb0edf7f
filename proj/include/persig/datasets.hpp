#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/common.hpp"

namespace persig {

/// Benchmark parameter values of the orbit recurrence; the parameter doubles
/// as the class label.
inline constexpr std::array<double, 5> kOrbitParameters{2.5, 3.5, 4.0, 4.1, 4.3};

struct OrbitSpec {
  double r = 4.0;
  int n_points = 1000;
  std::uint64_t seed = 0;
  /// false: the y-update reads the pre-update x_n (the printed recurrence);
  /// true: it reads the already-updated x_{n+1} (the convention of the
  /// original benchmark).
  bool sequential_update = false;
};

/// Orbit of x_{n+1} = x_n + r y_n (1 - y_n) mod 1,
///          y_{n+1} = y_n + r x (1 - x) mod 1
/// started uniformly at random in (0,1)^2; deterministic per seed.
inline std::vector<std::array<double, 2>> generate_orbit(const OrbitSpec& spec) {
  if (spec.n_points < 2) throw std::invalid_argument("generate_orbit: need >= 2 points");
  Rng rng(spec.seed);
  double x = rng.uniform01();
  double y = rng.uniform01();
  std::vector<std::array<double, 2>> points;
  points.reserve(static_cast<std::size_t>(spec.n_points));
  points.push_back({x, y});
  for (int i = 1; i < spec.n_points; ++i) {
    const double nx = std::fmod(x + spec.r * y * (1.0 - y), 1.0);
    const double x_for_y = spec.sequential_update ? nx : x;
    const double ny = std::fmod(y + spec.r * x_for_y * (1.0 - x_for_y), 1.0);
    x = nx;
    y = ny;
    points.push_back({x, y});
  }
  return points;
}

enum class ShapeKind { Random, Circle, Sphere, Clusters, ClustersOfClusters, Torus };

inline ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "random") return ShapeKind::Random;
  if (name == "circle") return ShapeKind::Circle;
  if (name == "sphere") return ShapeKind::Sphere;
  if (name == "clusters") return ShapeKind::Clusters;
  if (name == "clusters-of-clusters") return ShapeKind::ClustersOfClusters;
  if (name == "torus") return ShapeKind::Torus;
  throw std::invalid_argument("unknown shape kind: " + name);
}

inline std::string shape_kind_name(ShapeKind kind) {
  switch (kind) {
  case ShapeKind::Random: return "random";
  case ShapeKind::Circle: return "circle";
  case ShapeKind::Sphere: return "sphere";
  case ShapeKind::Clusters: return "clusters";
  case ShapeKind::ClustersOfClusters: return "clusters-of-clusters";
  case ShapeKind::Torus: return "torus";
  }
  return "?";
}

inline constexpr std::array<ShapeKind, 6> kShapeKinds{
    ShapeKind::Random,   ShapeKind::Circle,
    ShapeKind::Sphere,   ShapeKind::Clusters,
    ShapeKind::ClustersOfClusters, ShapeKind::Torus,
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Circle;
  int n_points = 100;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
};

/// Uniform samples on the named object plus isotropic Gaussian noise.
/// Geometry: circle of radius 1 in 2-d; sphere of radius 1 and torus of radii
/// (1, 0.4) in 3-d; `random` is uniform on the unit cube in 3-d; `clusters`
/// draws 5 centers uniformly in [0,2]^3; `clusters-of-clusters` draws 3 group
/// centers uniformly in [0,2]^3 and 3 subcenters per group at Gaussian spread
/// 0.25 around them.
inline std::vector<std::vector<double>> generate_shape(const ShapeSpec& spec) {
  if (spec.n_points < 1) throw std::invalid_argument("generate_shape: need >= 1 point");
  if (spec.noise_sd < 0.0) throw std::invalid_argument("generate_shape: negative noise");
  Rng rng(spec.seed);
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(spec.n_points));

  auto noisy = [&](std::vector<double> p) {
    for (double& c : p) c += spec.noise_sd * rng.normal();
    return p;
  };

  switch (spec.kind) {
  case ShapeKind::Random: {
    for (int i = 0; i < spec.n_points; ++i)
      points.push_back(noisy({rng.uniform01(), rng.uniform01(), rng.uniform01()}));
    break;
  }
  case ShapeKind::Circle: {
    for (int i = 0; i < spec.n_points; ++i) {
      const double angle = 2.0 * std::numbers::pi * rng.uniform01();
      points.push_back(noisy({std::cos(angle), std::sin(angle)}));
    }
    break;
  }
  case ShapeKind::Sphere: {
    for (int i = 0; i < spec.n_points; ++i) {
      double x, y, z, norm;
      do {
        x = rng.normal();
        y = rng.normal();
        z = rng.normal();
        norm = std::sqrt(x * x + y * y + z * z);
      } while (norm == 0.0);
      points.push_back(noisy({x / norm, y / norm, z / norm}));
    }
    break;
  }
  case ShapeKind::Clusters: {
    std::vector<std::vector<double>> centers;
    for (int c = 0; c < 5; ++c)
      centers.push_back({2.0 * rng.uniform01(), 2.0 * rng.uniform01(), 2.0 * rng.uniform01()});
    for (int i = 0; i < spec.n_points; ++i)
      points.push_back(noisy(centers[rng.uniform_index(centers.size())]));
    break;
  }
  case ShapeKind::ClustersOfClusters: {
    std::vector<std::vector<double>> centers;
    for (int g = 0; g < 3; ++g) {
      const std::vector<double> group{2.0 * rng.uniform01(), 2.0 * rng.uniform01(),
                                      2.0 * rng.uniform01()};
      for (int s = 0; s < 3; ++s)
        centers.push_back({group[0] + 0.25 * rng.normal(), group[1] + 0.25 * rng.normal(),
                           group[2] + 0.25 * rng.normal()});
    }
    for (int i = 0; i < spec.n_points; ++i)
      points.push_back(noisy(centers[rng.uniform_index(centers.size())]));
    break;
  }
  case ShapeKind::Torus: {
    constexpr double R = 1.0;
    constexpr double r = 0.4;
    for (int i = 0; i < spec.n_points; ++i) {
      // Rejection sampling corrects for the area element (R + r cos v).
      double u, v;
      do {
        u = 2.0 * std::numbers::pi * rng.uniform01();
        v = 2.0 * std::numbers::pi * rng.uniform01();
      } while (rng.uniform01() > (R + r * std::cos(v)) / (R + r));
      points.push_back(noisy({(R + r * std::cos(v)) * std::cos(u),
                              (R + r * std::cos(v)) * std::sin(u), r * std::sin(v)}));
    }
    break;
  }
  }
  return points;
}

}  // namespace persig
