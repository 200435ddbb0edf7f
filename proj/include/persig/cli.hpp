#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "persig/barcode.hpp"
#include "persig/bench.hpp"
#include "persig/bottleneck.hpp"
#include "persig/datasets.hpp"
#include "persig/embeddings.hpp"
#include "persig/io.hpp"
#include "persig/kernel.hpp"
#include "persig/learn.hpp"
#include "persig/rips.hpp"
#include "persig/signature.hpp"

namespace persig::cli {

namespace detail {

inline std::vector<double> parse_lags(const std::string& text) {
  std::vector<double> lags;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (cell.empty()) continue;
    lags.push_back(std::stod(cell));
  }
  return lags;
}

inline CoefficientTable load_coefficients(const std::string& path) {
  std::ifstream in = open_input(path);
  return CoefficientTable(read_point_cloud_csv(in));
}

struct EmbedOptions {
  std::string embedding = "euler";
  int dim = 0;
  int K = 0;
  int N = 0;
  int betti_n = 2;
  std::string coeffs_path;

  void attach(CLI::App* app) {
    app->add_option("--embedding", embedding,
                    "landscape|ilandscape|envelope|naive|betti|euler|gbetti")
        ->capture_default_str();
    app->add_option("--dim", dim, "homological dimension for single-dimension embeddings")
        ->capture_default_str();
    app->add_option("--K", K, "landscape truncation; 0 = all nonzero landscapes")
        ->capture_default_str();
    app->add_option("--N", N, "restricted envelope truncation; 0 = unrestricted")
        ->capture_default_str();
    app->add_option("--betti-n", betti_n, "coordinates of the Betti embedding")
        ->capture_default_str();
    app->add_option("--coeffs", coeffs_path, "coefficient CSV for gbetti");
  }

  EmbeddingSpec spec() const {
    EmbeddingSpec out;
    out.kind = parse_embedding_kind(embedding);
    out.dim = dim;
    out.K = K;
    out.N = N;
    out.betti_n = betti_n;
    if (out.kind == EmbeddingKind::GeneralizedBetti) {
      if (coeffs_path.empty())
        throw std::runtime_error("gbetti embedding needs --coeffs <csv>");
      out.coeffs = load_coefficients(coeffs_path);
    }
    return out;
  }
};

struct KernelOptions {
  std::string kappa = "linear";
  double sigma = 0.0;  // 0 = median heuristic for rbf

  void attach(CLI::App* app) {
    app->add_option("--kappa", kappa, "linear|rbf")->capture_default_str();
    app->add_option("--sigma", sigma, "rbf lengthscale; 0 = median heuristic")
        ->capture_default_str();
  }

  StaticKernel resolve(const std::vector<PiecewiseLinearPath>& paths) const {
    if (kappa == "linear") {
      if (sigma != 0.0) throw std::runtime_error("--sigma requires --kappa rbf");
      return StaticKernel::linear();
    }
    if (kappa == "rbf")
      return StaticKernel::rbf(sigma > 0.0 ? sigma : median_pairwise_distance(paths));
    throw std::runtime_error("unknown static kernel: " + kappa);
  }
};

/// Manifest entries may point at barcode files (.bar) or point-cloud CSVs;
/// clouds are run through Rips persistence first.
inline Barcode barcode_from_file(const std::string& path, int max_dim, double max_scale) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".bar") {
    std::ifstream in = open_input(path);
    return load_barcode(in);
  }
  std::ifstream in = open_input(path);
  const auto rows = read_point_cloud_csv(in);
  if (max_scale <= 0.0)
    throw std::runtime_error("point-cloud input needs --max-scale: " + path);
  return persistence(build_rips(DistanceMatrix::from_points(rows), max_dim, max_scale));
}

// ---- subcommands ----------------------------------------------------------

inline int cmd_gen(const std::string& family, const std::string& out_dir, int per_class,
                   int points, double noise, std::uint64_t seed, bool sequential) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::pair<std::string, int>> manifest;
  if (family == "orbits") {
    for (std::size_t cls = 0; cls < kOrbitParameters.size(); ++cls)
      for (int i = 0; i < per_class; ++i) {
        OrbitSpec spec;
        spec.r = kOrbitParameters[cls];
        spec.n_points = points;
        spec.seed = persig::detail::derive_seed(seed, cls * 1000 + static_cast<std::size_t>(i));
        spec.sequential_update = sequential;
        const auto orbit = generate_orbit(spec);
        std::vector<std::vector<double>> cloud;
        cloud.reserve(orbit.size());
        for (const auto& p : orbit) cloud.push_back({p[0], p[1]});
        std::ostringstream name;
        name << "orbit_r" << format_double(kOrbitParameters[cls]) << "_" << i << ".csv";
        std::ofstream out = open_output((fs::path(out_dir) / name.str()).string());
        write_point_cloud_csv(cloud, out);
        manifest.emplace_back(name.str(), static_cast<int>(cls));
      }
  } else if (family == "shapes") {
    for (std::size_t cls = 0; cls < kShapeKinds.size(); ++cls)
      for (int i = 0; i < per_class; ++i) {
        ShapeSpec spec;
        spec.kind = kShapeKinds[cls];
        spec.n_points = points;
        spec.noise_sd = noise;
        spec.seed = persig::detail::derive_seed(seed, cls * 1000 + static_cast<std::size_t>(i));
        const auto cloud = generate_shape(spec);
        std::ostringstream name;
        name << "shape_" << shape_kind_name(kShapeKinds[cls]) << "_" << i << ".csv";
        std::ofstream out = open_output((fs::path(out_dir) / name.str()).string());
        write_point_cloud_csv(cloud, out);
        manifest.emplace_back(name.str(), static_cast<int>(cls));
      }
  } else {
    throw std::runtime_error("gen: unknown family '" + family + "' (orbits|shapes)");
  }
  std::ofstream out = open_output((fs::path(out_dir) / "manifest.csv").string());
  write_manifest(manifest, out);
  return 0;
}

inline int cmd_rips(const std::string& input, const std::string& output, int max_dim,
                    double max_scale, bool precomputed, const std::string& euler_csv,
                    const std::string& coeffs_path, const std::string& simplex_csv) {
  std::ifstream in = open_input(input);
  const auto rows = read_point_cloud_csv(in);
  std::optional<DistanceMatrix> d;
  if (precomputed) {
    if (rows.size() != rows.front().size())
      throw std::runtime_error("distance matrix: not square: " + input);
    std::vector<double> flat;
    for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
    d.emplace(std::move(flat), rows.size());
  } else {
    d.emplace(DistanceMatrix::from_points(rows));
  }
  const FilteredComplex complex = build_rips(*d, max_dim, max_scale);
  const Barcode barcode = persistence(complex);
  std::ofstream out = open_output(output);
  save_barcode(barcode, out);
  if (!euler_csv.empty()) {
    std::ofstream path_out = open_output(euler_csv);
    save_path_csv(euler_curve_counts(complex), path_out);
  }
  if (!simplex_csv.empty()) {
    if (coeffs_path.empty())
      throw std::runtime_error("--simplex-csv needs --coeffs <csv>");
    std::ofstream path_out = open_output(simplex_csv);
    save_path_csv(simplex_embedding(complex, load_coefficients(coeffs_path)), path_out);
  }
  return 0;
}

inline int cmd_embed(const std::string& input, const std::string& output,
                     const EmbedOptions& options) {
  std::ifstream in = open_input(input);
  const Barcode barcode = load_barcode(in);
  std::ofstream out = open_output(output);
  save_path_csv(embed(barcode, options.spec()), out);
  return 0;
}

inline int cmd_sig(const std::string& input, const std::string& output, int M, bool tau,
                   const std::string& lags_text, bool drop_level0, std::size_t budget) {
  std::ifstream in = open_input(input);
  PiecewiseLinearPath path = load_path_csv(in);
  if (tau) path = time_augment(path);
  const std::vector<double> lags = parse_lags(lags_text);
  if (!lags.empty()) path = add_lags(path, lags);
  const TruncatedTensor tensor = signature(path, M, budget);
  std::ofstream out = open_output(output);
  out << "# persig features v1\n";
  const auto labels = word_labels(tensor.dimension(), M, drop_level0);
  for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
  out << "\n";
  const auto values = flatten(tensor, drop_level0);
  for (std::size_t i = 0; i < values.size(); ++i)
    out << (i ? "," : "") << format_double(values[i]);
  out << "\n";
  return 0;
}

inline int cmd_gram(const std::string& manifest_path, const std::string& output,
                    const EmbedOptions& embed_options, const KernelOptions& kernel_options,
                    int M, bool tau, const std::string& lags_text, int max_dim,
                    double max_scale, unsigned threads) {
  const auto entries = read_manifest(manifest_path);
  PipelineParams params;
  params.M = M;
  params.time_aug = tau;
  params.lags = parse_lags(lags_text);
  const EmbeddingSpec spec = embed_options.spec();
  std::vector<PiecewiseLinearPath> paths;
  paths.reserve(entries.size());
  for (const auto& entry : entries)
    paths.push_back(kernelized_feature_pipeline(barcode_from_file(entry.path, max_dim, max_scale),
                                                spec, params));
  const StaticKernel kappa = kernel_options.resolve(paths);
  GramMetadata meta;
  meta.embedding = embed_options.embedding;
  meta.dim = embed_options.dim;
  meta.tau = tau ? 1 : 0;
  meta.lags = params.lags;
  meta.envelope_N = embed_options.N;
  const GramMatrix g = gram(paths, M, kappa, meta, threads);
  std::ofstream out = open_output(output);
  write_gram_csv(g, out);
  std::ofstream meta_out = open_output(output + ".meta");
  write_gram_metadata(g, meta_out);
  return 0;
}

inline int cmd_classify(const std::string& manifest_path, const EmbedOptions& embed_options,
                        const KernelOptions& kernel_options, int M, bool tau,
                        const std::string& lags_text, const std::string& classifier_name,
                        int k, bool use_kernel, double split, int reps, std::uint64_t seed,
                        int max_dim, double max_scale, bool shuffle_labels, unsigned threads,
                        std::ostream& out) {
  const auto entries = read_manifest(manifest_path);
  LabeledDataset data;
  for (const auto& entry : entries) {
    data.barcodes.push_back(barcode_from_file(entry.path, max_dim, max_scale));
    data.labels.push_back(entry.label);
  }
  if (shuffle_labels) {
    Rng rng(seed ^ 0x5u);
    rng.shuffle(data.labels);
  }
  GridCell cell;
  cell.embedding = embed_options.spec();
  cell.params.M = M;
  cell.params.time_aug = tau;
  cell.params.lags = parse_lags(lags_text);
  cell.params.envelope_N = embed_options.N;
  ClassifierSpec clf;
  clf.k = k;
  if (classifier_name == "knn")
    clf.kind = use_kernel ? ClassifierKind::KernelKnn : ClassifierKind::FeatureKnn;
  else if (classifier_name == "centroid")
    clf.kind = ClassifierKind::Centroid;
  else
    throw std::runtime_error("unknown classifier: " + classifier_name);
  if (use_kernel) {
    if (kernel_options.kappa == "rbf") {
      // sigma = 0 defers to the per-split training median heuristic.
      cell.params.kappa = StaticKernel::rbf(kernel_options.sigma > 0.0 ? kernel_options.sigma : 1.0);
      cell.params.sigma_from_median = kernel_options.sigma == 0.0;
    } else if (kernel_options.kappa == "linear") {
      if (kernel_options.sigma != 0.0) throw std::runtime_error("--sigma requires --kappa rbf");
      cell.params.kappa = StaticKernel::linear();
    } else {
      throw std::runtime_error("unknown static kernel: " + kernel_options.kappa);
    }
  }
  const EvalResult result = evaluate(data, cell, clf, reps, split, seed, threads);
  out << "# persig classify v1\n";
  out << "rep,accuracy\n";
  for (std::size_t r = 0; r < result.accuracies.size(); ++r)
    out << r << ',' << format_double(result.accuracies[r]) << "\n";
  char buf[80];
  std::snprintf(buf, sizeof(buf), "mean %.4f\nstd %.4f\n", result.mean, result.stddev);
  out << buf;
  return 0;
}

}  // namespace detail

/// Command-line front end. Exit codes: 0 success, 2 usage error, 1 data error.
inline int run(int argc, const char* const* argv) {
  CLI::App app{"persistence barcodes -> paths -> signature features"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic benchmark point clouds");
  std::string gen_family;
  std::string gen_out = "data";
  int gen_per_class = 20;
  int gen_points = 300;
  double gen_noise = 0.1;
  std::uint64_t gen_seed = 7;
  bool gen_sequential = false;
  gen->add_option("family", gen_family, "orbits|shapes")->required();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();
  gen->add_option("--per-class", gen_per_class)->capture_default_str();
  gen->add_option("--points", gen_points)->capture_default_str();
  gen->add_option("--noise", gen_noise, "shape noise standard deviation")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_flag("--sequential-update", gen_sequential,
                "orbit y-update reads the already-updated x");

  // rips
  auto* rips = app.add_subcommand("rips", "Vietoris-Rips persistence of a point cloud");
  std::string rips_in, rips_out;
  int rips_max_dim = 1;
  double rips_max_scale = 0.0;
  bool rips_precomputed = false;
  std::string rips_euler_csv, rips_coeffs, rips_simplex_csv;
  rips->add_option("input", rips_in, "point cloud CSV (or distance matrix)")->required();
  rips->add_option("output", rips_out, "barcode file")->required();
  rips->add_option("--max-dim", rips_max_dim)->capture_default_str();
  rips->add_option("--max-scale", rips_max_scale, "filtration cutoff")->required();
  rips->add_flag("--precomputed", rips_precomputed, "input is a distance matrix CSV");
  rips->add_option("--euler-csv", rips_euler_csv, "also write the simplex-count Euler path");
  rips->add_option("--coeffs", rips_coeffs, "coefficient CSV for --simplex-csv");
  rips->add_option("--simplex-csv", rips_simplex_csv,
                   "also write a generalized simplex-count path");

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "barcode to path");
  std::string embed_in, embed_out;
  detail::EmbedOptions embed_options;
  embed_cmd->add_option("input", embed_in, "barcode file")->required();
  embed_cmd->add_option("output", embed_out, "path CSV")->required();
  embed_options.attach(embed_cmd);

  // sig
  auto* sig_cmd = app.add_subcommand("sig", "truncated signature features of a path");
  std::string sig_in, sig_out, sig_lags;
  int sig_M = 4;
  bool sig_tau = false;
  bool sig_drop0 = false;
  std::size_t sig_budget = 10'000'000;
  sig_cmd->add_option("input", sig_in, "path CSV")->required();
  sig_cmd->add_option("output", sig_out, "feature CSV")->required();
  sig_cmd->add_option("--M", sig_M, "truncation level")->capture_default_str();
  sig_cmd->add_flag("--tau", sig_tau, "time-augment before the signature");
  sig_cmd->add_option("--lags", sig_lags, "comma-separated nonnegative lags");
  sig_cmd->add_flag("--drop-level0", sig_drop0, "omit the constant level-0 coefficient");
  sig_cmd->add_option("--budget", sig_budget, "coefficient budget")->capture_default_str();

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "signature-kernel Gram matrix");
  std::string gram_manifest, gram_out, gram_lags;
  detail::EmbedOptions gram_embed;
  detail::KernelOptions gram_kernel;
  int gram_M = 2;
  bool gram_tau = false;
  int gram_max_dim = 1;
  double gram_max_scale = 0.0;
  unsigned gram_threads = 0;
  gram_cmd->add_option("manifest", gram_manifest, "manifest of barcode or cloud files")
      ->required();
  gram_cmd->add_option("output", gram_out, "Gram CSV (metadata sidecar: <output>.meta)")
      ->required();
  gram_embed.attach(gram_cmd);
  gram_kernel.attach(gram_cmd);
  gram_cmd->add_option("--M", gram_M)->capture_default_str();
  gram_cmd->add_flag("--tau", gram_tau);
  gram_cmd->add_option("--lags", gram_lags);
  gram_cmd->add_option("--max-dim", gram_max_dim)->capture_default_str();
  gram_cmd->add_option("--max-scale", gram_max_scale, "needed for point-cloud manifests")
      ->capture_default_str();
  gram_cmd->add_option("--threads", gram_threads, "0 = PERSIG_THREADS or all cores")
      ->capture_default_str();

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "train/test evaluation of a pipeline");
  std::string cls_manifest, cls_lags, cls_classifier = "knn";
  detail::EmbedOptions cls_embed;
  detail::KernelOptions cls_kernel;
  int cls_M = 4;
  bool cls_tau = false;
  int cls_k = 1;
  bool cls_use_kernel = false;
  double cls_split = 0.5;
  int cls_reps = 5;
  std::uint64_t cls_seed = 7;
  int cls_max_dim = 1;
  double cls_max_scale = 0.0;
  bool cls_shuffle = false;
  unsigned cls_threads = 0;
  std::string cls_out;
  cls_cmd->add_option("manifest", cls_manifest, "manifest of barcode or cloud files")
      ->required();
  cls_embed.attach(cls_cmd);
  cls_kernel.attach(cls_cmd);
  cls_cmd->add_option("--M", cls_M)->capture_default_str();
  cls_cmd->add_flag("--tau", cls_tau);
  cls_cmd->add_option("--lags", cls_lags);
  cls_cmd->add_option("--classifier", cls_classifier, "knn|centroid")->capture_default_str();
  cls_cmd->add_option("--k", cls_k, "neighbours for knn")->capture_default_str();
  cls_cmd->add_flag("--kernel", cls_use_kernel, "kernelized knn instead of features");
  cls_cmd->add_option("--split", cls_split, "train fraction")->capture_default_str();
  cls_cmd->add_option("--reps", cls_reps)->capture_default_str();
  cls_cmd->add_option("--seed", cls_seed)->capture_default_str();
  cls_cmd->add_option("--max-dim", cls_max_dim)->capture_default_str();
  cls_cmd->add_option("--max-scale", cls_max_scale)->capture_default_str();
  cls_cmd->add_flag("--shuffle-labels", cls_shuffle, "chance-level control");
  cls_cmd->add_option("--threads", cls_threads)->capture_default_str();
  cls_cmd->add_option("--out", cls_out, "write the report here instead of stdout");

  // benches
  BenchConfig orbit_config;
  auto* bo = app.add_subcommand("bench-orbits", "desk-scale orbit benchmark table");
  bo->add_option("--per-class", orbit_config.per_class)->capture_default_str();
  bo->add_option("--points", orbit_config.points)->capture_default_str();
  bo->add_option("--seed", orbit_config.seed)->capture_default_str();
  bo->add_option("--reps", orbit_config.repetitions)->capture_default_str();
  bo->add_option("--max-scale", orbit_config.max_scale)->capture_default_str();
  bo->add_option("--threads", orbit_config.threads)->capture_default_str();
  bo->add_flag("--sequential-update", orbit_config.sequential_update);

  BenchConfig shape_config;
  shape_config.per_class = 10;
  shape_config.points = 100;
  shape_config.max_scale = 1.0;
  auto* bs = app.add_subcommand("bench-shapes", "desk-scale shapes benchmark table");
  bs->add_option("--per-class", shape_config.per_class)->capture_default_str();
  bs->add_option("--points", shape_config.points)->capture_default_str();
  bs->add_option("--noise", shape_config.noise)->capture_default_str();
  bs->add_option("--seed", shape_config.seed)->capture_default_str();
  bs->add_option("--reps", shape_config.repetitions)->capture_default_str();
  bs->add_option("--max-scale", shape_config.max_scale)->capture_default_str();
  bs->add_option("--threads", shape_config.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed())
      return detail::cmd_gen(gen_family, gen_out, gen_per_class, gen_points, gen_noise,
                             gen_seed, gen_sequential);
    if (rips->parsed())
      return detail::cmd_rips(rips_in, rips_out, rips_max_dim, rips_max_scale,
                              rips_precomputed, rips_euler_csv, rips_coeffs, rips_simplex_csv);
    if (embed_cmd->parsed()) return detail::cmd_embed(embed_in, embed_out, embed_options);
    if (sig_cmd->parsed())
      return detail::cmd_sig(sig_in, sig_out, sig_M, sig_tau, sig_lags, sig_drop0, sig_budget);
    if (gram_cmd->parsed())
      return detail::cmd_gram(gram_manifest, gram_out, gram_embed, gram_kernel, gram_M,
                              gram_tau, gram_lags, gram_max_dim, gram_max_scale, gram_threads);
    if (cls_cmd->parsed()) {
      if (!cls_out.empty()) {
        std::ofstream out = open_output(cls_out);
        return detail::cmd_classify(cls_manifest, cls_embed, cls_kernel, cls_M, cls_tau,
                                    cls_lags, cls_classifier, cls_k, cls_use_kernel, cls_split,
                                    cls_reps, cls_seed, cls_max_dim, cls_max_scale, cls_shuffle,
                                    cls_threads, out);
      }
      return detail::cmd_classify(cls_manifest, cls_embed, cls_kernel, cls_M, cls_tau, cls_lags,
                                  cls_classifier, cls_k, cls_use_kernel, cls_split, cls_reps,
                                  cls_seed, cls_max_dim, cls_max_scale, cls_shuffle, cls_threads,
                                  std::cout);
    }
    if (bo->parsed()) {
      std::cout << format_bench_table(bench_orbits(orbit_config));
      return 0;
    }
    if (bs->parsed()) {
      std::cout << format_bench_table(bench_shapes(shape_config));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace persig::cli
