#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "persig/common.hpp"
#include "persig/datasets.hpp"
#include "persig/learn.hpp"
#include "persig/rips.hpp"

namespace persig {

/// Desk-scale reruns of the orbit and shapes experiments.
struct BenchConfig {
  int per_class = 20;
  int points = 300;
  double noise = 0.1;  // shapes only
  std::uint64_t seed = 7;
  int repetitions = 5;
  double train_fraction = 0.5;
  double max_scale = 0.2;
  int max_dim = 1;
  bool sequential_update = false;  // orbit recurrence variant
  unsigned threads = 0;
};

struct BenchRow {
  std::string method;
  EvalResult result;
};

struct BenchReport {
  std::string title;
  std::vector<BenchRow> rows;
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // SplitMix64 step over base + index; documented, portable stream split.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline Barcode cloud_barcode(const std::vector<std::vector<double>>& cloud, int max_dim,
                             double max_scale) {
  const DistanceMatrix d = DistanceMatrix::from_points(cloud);
  return persistence(build_rips(d, max_dim, max_scale));
}

}  // namespace detail

/// Orbit clouds (5 classes, one per parameter value) reduced to barcodes.
inline LabeledDataset orbit_barcodes(const BenchConfig& config) {
  std::vector<std::vector<std::array<double, 2>>> clouds;
  LabeledDataset data;
  for (std::size_t cls = 0; cls < kOrbitParameters.size(); ++cls)
    for (int i = 0; i < config.per_class; ++i) {
      OrbitSpec spec;
      spec.r = kOrbitParameters[cls];
      spec.n_points = config.points;
      spec.seed = detail::derive_seed(config.seed, cls * 1000 + static_cast<std::size_t>(i));
      spec.sequential_update = config.sequential_update;
      clouds.push_back(generate_orbit(spec));
      data.labels.push_back(static_cast<int>(cls));
    }
  data.barcodes.assign(clouds.size(), Barcode{});
  parallel_for(
      clouds.size(),
      [&](std::size_t i) {
        std::vector<std::vector<double>> cloud;
        cloud.reserve(clouds[i].size());
        for (const auto& p : clouds[i]) cloud.push_back({p[0], p[1]});
        data.barcodes[i] = detail::cloud_barcode(cloud, config.max_dim, config.max_scale);
      },
      config.threads);
  return data;
}

/// Shape clouds (6 classes) reduced to barcodes.
inline LabeledDataset shape_barcodes(const BenchConfig& config) {
  std::vector<std::vector<std::vector<double>>> clouds;
  LabeledDataset data;
  for (std::size_t cls = 0; cls < kShapeKinds.size(); ++cls)
    for (int i = 0; i < config.per_class; ++i) {
      ShapeSpec spec;
      spec.kind = kShapeKinds[cls];
      spec.n_points = config.points;
      spec.noise_sd = config.noise;
      spec.seed = detail::derive_seed(config.seed, cls * 1000 + static_cast<std::size_t>(i));
      clouds.push_back(generate_shape(spec));
      data.labels.push_back(static_cast<int>(cls));
    }
  data.barcodes.assign(clouds.size(), Barcode{});
  parallel_for(
      clouds.size(),
      [&](std::size_t i) {
        data.barcodes[i] = detail::cloud_barcode(clouds[i], config.max_dim, config.max_scale);
      },
      config.threads);
  return data;
}

namespace detail {

inline GridCell feature_cell(EmbeddingKind kind, int dim, int betti_n, int M) {
  GridCell cell;
  cell.embedding.kind = kind;
  cell.embedding.dim = dim;
  cell.embedding.betti_n = betti_n;
  cell.params.M = M;
  cell.params.time_aug = true;
  return cell;
}

inline GridCell kernel_cell(int dim, int envelope_N, int M) {
  GridCell cell;
  cell.embedding.kind = EmbeddingKind::Envelope;
  cell.embedding.dim = dim;
  cell.params.M = M;
  cell.params.time_aug = true;
  cell.params.envelope_N = envelope_N;
  cell.params.kappa = StaticKernel::rbf(1.0);
  cell.params.sigma_from_median = true;
  return cell;
}

inline LabeledDataset shuffled_labels(const LabeledDataset& data, std::uint64_t seed) {
  LabeledDataset shuffled = data;
  Rng rng(seed);
  rng.shuffle(shuffled.labels);
  return shuffled;
}

}  // namespace detail

/// Feature pipelines Phi_E, Phi_chi, Phi_beta with 1-NN, the kernelized
/// envelope k_E, and a shuffled-label chance control.
inline BenchReport run_bench(const LabeledDataset& data, const BenchConfig& config,
                             int envelope_dim, const std::string& title) {
  const ClassifierSpec feature_knn{ClassifierKind::FeatureKnn, 1};
  const ClassifierSpec kernel_knn{ClassifierKind::KernelKnn, 1};
  BenchReport report;
  report.title = title;
  auto run = [&](const std::string& name, const GridCell& cell, const ClassifierSpec& clf,
                 const LabeledDataset& dataset) {
    report.rows.push_back(BenchRow{
        name, evaluate(dataset, cell, clf, config.repetitions, config.train_fraction,
                       config.seed, config.threads)});
  };
  run("Phi_E", detail::feature_cell(EmbeddingKind::Envelope, envelope_dim, 1, 4), feature_knn,
      data);
  run("Phi_chi", detail::feature_cell(EmbeddingKind::Euler, 0, 1, 4), feature_knn, data);
  run("Phi_beta",
      detail::feature_cell(EmbeddingKind::Betti, 0, config.max_dim + 1, 4), feature_knn, data);
  run("k_E", detail::kernel_cell(envelope_dim, 20, 2), kernel_knn, data);
  run("control", detail::feature_cell(EmbeddingKind::Euler, 0, 1, 4), feature_knn,
      detail::shuffled_labels(data, config.seed ^ 0x5u));
  return report;
}

inline BenchReport bench_orbits(const BenchConfig& config) {
  return run_bench(orbit_barcodes(config), config, 0, "Orbits");
}

inline BenchReport bench_shapes(const BenchConfig& config) {
  return run_bench(shape_barcodes(config), config, 1, "Shapes");
}

/// Mean accuracy (plus/minus standard deviation) table.
inline std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  out << "Method      " << report.title << "\n";
  for (const BenchRow& row : report.rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-11s %.1f +/- %.1f\n", row.method.c_str(),
                  100.0 * row.result.mean, 100.0 * row.result.stddev);
    out << buf;
  }
  return out.str();
}

}  // namespace persig
