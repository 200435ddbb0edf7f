#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/barcode.hpp"
#include "persig/common.hpp"
#include "persig/embeddings.hpp"
#include "persig/kernel.hpp"
#include "persig/signature.hpp"

namespace persig {

/// Barcodes with integer class labels, contiguous from 0.
struct LabeledDataset {
  std::vector<Barcode> barcodes;
  std::vector<int> labels;

  void validate() const {
    if (barcodes.size() != labels.size())
      throw std::invalid_argument("LabeledDataset: size mismatch");
    if (barcodes.empty()) throw std::invalid_argument("LabeledDataset: empty");
    const int classes = num_classes();
    if (classes < 2) throw std::invalid_argument("LabeledDataset: needs >= 2 classes");
    std::vector<char> seen(static_cast<std::size_t>(classes), 0);
    for (int label : labels) {
      if (label < 0 || label >= classes)
        throw std::invalid_argument("LabeledDataset: label out of range");
      seen[static_cast<std::size_t>(label)] = 1;
    }
    for (char s : seen)
      if (!s) throw std::invalid_argument("LabeledDataset: labels not contiguous from 0");
  }

  int num_classes() const {
    int top = -1;
    for (int label : labels) top = std::max(top, label);
    return top + 1;
  }
};

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw std::invalid_argument("accuracy: size mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (predicted[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

/// k-nearest-neighbour vote from one row of squared distances to the training
/// set. Distance ties break by training index, vote ties by smallest label.
inline int knn_vote(const std::vector<double>& sq_dist, const std::vector<int>& labels, int k) {
  if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
  if (static_cast<std::size_t>(k) > labels.size())
    throw std::invalid_argument("knn: k exceeds training size");
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sq_dist[a] != sq_dist[b] ? sq_dist[a] < sq_dist[b] : a < b;
  });
  const int classes = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<int> votes(static_cast<std::size_t>(classes), 0);
  for (int i = 0; i < k; ++i) ++votes[static_cast<std::size_t>(labels[order[static_cast<std::size_t>(i)]])];
  int best = 0;
  for (int c = 1; c < classes; ++c)
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)]) best = c;
  return best;
}

/// Kernel k-NN: squared kernel distance d^2(x, y) = k(x,x) + k(y,y) - 2 k(x,y).
/// `cross[t][i]` holds k(test_t, train_i); `test_self[t]` holds k(test_t, test_t).
inline std::vector<int> knn_classify(const GramMatrix& train_gram,
                                     const std::vector<std::vector<double>>& cross,
                                     const std::vector<double>& test_self,
                                     const std::vector<int>& labels, int k) {
  if (train_gram.size() != labels.size())
    throw std::invalid_argument("knn_classify: gram/label size mismatch");
  if (cross.size() != test_self.size())
    throw std::invalid_argument("knn_classify: cross/test_self size mismatch");
  std::vector<int> predictions;
  predictions.reserve(cross.size());
  std::vector<double> sq_dist(labels.size());
  for (std::size_t t = 0; t < cross.size(); ++t) {
    if (cross[t].size() != labels.size())
      throw std::invalid_argument("knn_classify: ragged cross matrix");
    for (std::size_t i = 0; i < labels.size(); ++i)
      sq_dist[i] = test_self[t] + train_gram(i, i) - 2.0 * cross[t][i];
    predictions.push_back(knn_vote(sq_dist, labels, k));
  }
  return predictions;
}

/// Feature-space k-NN with squared Euclidean distances.
inline std::vector<int> knn_classify_features(const std::vector<std::vector<double>>& train,
                                              const std::vector<std::vector<double>>& test,
                                              const std::vector<int>& labels, int k) {
  if (train.size() != labels.size())
    throw std::invalid_argument("knn_classify_features: size mismatch");
  std::vector<int> predictions;
  predictions.reserve(test.size());
  std::vector<double> sq_dist(train.size());
  for (const auto& point : test) {
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train[i].size() != point.size())
        throw std::invalid_argument("knn_classify_features: feature length mismatch");
      double acc = 0.0;
      for (std::size_t d = 0; d < point.size(); ++d) {
        const double diff = point[d] - train[i][d];
        acc += diff * diff;
      }
      sq_dist[i] = acc;
    }
    predictions.push_back(knn_vote(sq_dist, labels, k));
  }
  return predictions;
}

/// Nearest class-mean in flattened feature space; ties break by label order.
inline std::vector<int> centroid_classify(const std::vector<std::vector<double>>& train,
                                          const std::vector<int>& labels,
                                          const std::vector<std::vector<double>>& test) {
  if (train.size() != labels.size() || train.empty())
    throw std::invalid_argument("centroid_classify: size mismatch");
  const int classes = 1 + *std::max_element(labels.begin(), labels.end());
  const std::size_t dim = train.front().size();
  std::vector<std::vector<double>> means(static_cast<std::size_t>(classes),
                                         std::vector<double>(dim, 0.0));
  std::vector<int> counts(static_cast<std::size_t>(classes), 0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].size() != dim)
      throw std::invalid_argument("centroid_classify: feature length mismatch");
    auto& mean = means[static_cast<std::size_t>(labels[i])];
    for (std::size_t d = 0; d < dim; ++d) mean[d] += train[i][d];
    ++counts[static_cast<std::size_t>(labels[i])];
  }
  for (int c = 0; c < classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0)
      throw std::invalid_argument("centroid_classify: empty class " + std::to_string(c));
    for (double& v : means[static_cast<std::size_t>(c)])
      v /= counts[static_cast<std::size_t>(c)];
  }
  std::vector<int> predictions;
  predictions.reserve(test.size());
  for (const auto& point : test) {
    if (point.size() != dim)
      throw std::invalid_argument("centroid_classify: feature length mismatch");
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
      double acc = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = point[d] - means[static_cast<std::size_t>(c)][d];
        acc += diff * diff;
      }
      if (acc < best_dist) {  // strict: ties keep the smaller label
        best_dist = acc;
        best = c;
      }
    }
    predictions.push_back(best);
  }
  return predictions;
}

/// Stratified fold assignment: within each class, a seeded shuffle is dealt
/// round-robin. Errors when some class cannot reach every fold.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels,
                                                              int folds, Rng& rng) {
  if (folds < 2) throw std::invalid_argument("stratified_folds: folds must be >= 2");
  const int classes = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  for (int c = 0; c < classes; ++c)
    if (by_class[static_cast<std::size_t>(c)].size() < static_cast<std::size_t>(folds))
      throw std::invalid_argument("stratified_folds: class " + std::to_string(c) +
                                  " has fewer members than folds");
  std::vector<std::vector<std::size_t>> fold_indices(static_cast<std::size_t>(folds));
  for (int c = 0; c < classes; ++c) {
    auto& members = by_class[static_cast<std::size_t>(c)];
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      fold_indices[i % static_cast<std::size_t>(folds)].push_back(members[i]);
  }
  for (auto& fold : fold_indices) std::sort(fold.begin(), fold.end());
  return fold_indices;
}

/// Stratified train/test split: within each class, a seeded shuffle puts the
/// first round(fraction * size) members in the training set.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("stratified_split: fraction must be in (0, 1)");
  const int classes = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  std::vector<std::size_t> train, test;
  for (auto& members : by_class) {
    if (members.empty()) continue;
    rng.shuffle(members);
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < n_train ? train : test).push_back(members[i]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

enum class ClassifierKind { KernelKnn, FeatureKnn, Centroid };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::FeatureKnn;
  int k = 1;
};

/// One grid cell: an embedding plus pipeline hyperparameters pi.
struct GridCell {
  EmbeddingSpec embedding;
  PipelineParams params;
};

/// Candidate lists for the grid search. sigma = 0 selects the median
/// heuristic; N = 0 leaves the envelope unrestricted.
struct ParamGrid {
  std::vector<EmbeddingSpec> embeddings;
  std::vector<int> Ms{2, 3, 4, 5, 6};
  std::vector<int> taus{0, 1};
  std::vector<double> sigmas{0.0};
  std::vector<int> Ns{0};
  StaticKernel::Kind kappa = StaticKernel::Kind::Linear;

  std::vector<GridCell> expand() const {
    if (embeddings.empty() || Ms.empty() || taus.empty() || sigmas.empty() || Ns.empty())
      throw std::invalid_argument("ParamGrid: empty candidate list");
    // sigma only parametrises the rbf kernel.
    const std::vector<double> sigma_list =
        kappa == StaticKernel::Kind::Linear ? std::vector<double>{0.0} : sigmas;
    std::vector<GridCell> cells;
    for (const EmbeddingSpec& spec : embeddings)
      for (int M : Ms)
        for (int tau : taus)
          for (double sigma : sigma_list)
            for (int N : Ns) {
              GridCell cell;
              cell.embedding = spec;
              cell.params.M = M;
              cell.params.time_aug = tau != 0;
              cell.params.envelope_N = N;
              if (kappa == StaticKernel::Kind::Linear) {
                cell.params.kappa = StaticKernel::linear();
              } else {
                cell.params.kappa = StaticKernel::rbf(sigma > 0.0 ? sigma : 1.0);
                cell.params.sigma_from_median = sigma == 0.0;
              }
              cells.push_back(std::move(cell));
            }
    return cells;
  }
};

/// Runs one pipeline (embedding + pi + classifier) over arbitrary train/test
/// index splits of a dataset. Paths and features are computed once up front;
/// kernel classification evaluates only the Gram entries a split needs.
class PipelineEvaluator {
public:
  PipelineEvaluator(const LabeledDataset& data, const GridCell& cell,
                    const ClassifierSpec& classifier, unsigned threads = 0,
                    std::size_t budget = 10'000'000)
      : data_(data), cell_(cell), classifier_(classifier), threads_(threads) {
    data_.validate();
    const std::size_t n = data_.barcodes.size();
    paths_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      paths_.push_back(kernelized_feature_pipeline(data_.barcodes[i], cell_.embedding,
                                                   cell_.params));
    if (classifier_.kind != ClassifierKind::KernelKnn) {
      features_.assign(n, {});
      parallel_for(
          n,
          [&](std::size_t i) {
            features_[i] = flatten(signature(paths_[i], cell_.params.M, budget));
          },
          threads_);
    }
  }

  double split_accuracy(const std::vector<std::size_t>& train_idx,
                        const std::vector<std::size_t>& test_idx) const {
    std::vector<int> train_labels, test_labels;
    train_labels.reserve(train_idx.size());
    test_labels.reserve(test_idx.size());
    for (std::size_t i : train_idx) train_labels.push_back(data_.labels[i]);
    for (std::size_t i : test_idx) test_labels.push_back(data_.labels[i]);

    std::vector<int> predictions;
    switch (classifier_.kind) {
    case ClassifierKind::FeatureKnn:
      predictions = knn_classify_features(gather(features_, train_idx),
                                          gather(features_, test_idx), train_labels,
                                          classifier_.k);
      break;
    case ClassifierKind::Centroid:
      predictions = centroid_classify(gather(features_, train_idx), train_labels,
                                      gather(features_, test_idx));
      break;
    case ClassifierKind::KernelKnn: {
      StaticKernel kappa = cell_.params.kappa;
      if (cell_.params.sigma_from_median && kappa.kind == StaticKernel::Kind::Rbf) {
        std::vector<PiecewiseLinearPath> train_paths;
        train_paths.reserve(train_idx.size());
        for (std::size_t i : train_idx) train_paths.push_back(paths_[i]);
        kappa = StaticKernel::rbf(median_pairwise_distance(train_paths));
      }
      const int M = cell_.params.M;
      GramMatrix train_gram(train_idx.size(), GramMetadata{});
      std::vector<std::pair<std::size_t, std::size_t>> jobs;
      for (std::size_t i = 0; i < train_idx.size(); ++i)
        for (std::size_t j = i; j < train_idx.size(); ++j) jobs.emplace_back(i, j);
      parallel_for(
          jobs.size(),
          [&](std::size_t idx) {
            const auto [i, j] = jobs[idx];
            train_gram.set(i, j, sig_kernel(paths_[train_idx[i]], paths_[train_idx[j]], M, kappa));
          },
          threads_);
      std::vector<std::vector<double>> cross(test_idx.size(),
                                             std::vector<double>(train_idx.size(), 0.0));
      std::vector<double> test_self(test_idx.size(), 0.0);
      parallel_for(
          test_idx.size(),
          [&](std::size_t t) {
            for (std::size_t i = 0; i < train_idx.size(); ++i)
              cross[t][i] = sig_kernel(paths_[test_idx[t]], paths_[train_idx[i]], M, kappa);
            test_self[t] = sig_kernel(paths_[test_idx[t]], paths_[test_idx[t]], M, kappa);
          },
          threads_);
      predictions = knn_classify(train_gram, cross, test_self, train_labels, classifier_.k);
      break;
    }
    }
    return accuracy(predictions, test_labels);
  }

  const std::vector<PiecewiseLinearPath>& paths() const { return paths_; }
  const std::vector<std::vector<double>>& features() const { return features_; }

private:
  static std::vector<std::vector<double>> gather(const std::vector<std::vector<double>>& rows,
                                                 const std::vector<std::size_t>& idx) {
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(rows[i]);
    return out;
  }

  LabeledDataset data_;
  GridCell cell_;
  ClassifierSpec classifier_;
  unsigned threads_;
  std::vector<PiecewiseLinearPath> paths_;
  std::vector<std::vector<double>> features_;
};

struct GridSearchResult {
  GridCell best;
  double best_accuracy = 0.0;
  std::size_t best_index = 0;
  std::vector<double> cell_accuracies;  // mean validation accuracy per grid cell
};

/// Stratified cross-validated grid search; the winner is the first cell
/// attaining the best mean validation accuracy, in grid order.
inline GridSearchResult cross_validated_gridsearch(const LabeledDataset& data,
                                                   const ParamGrid& grid, int folds,
                                                   const ClassifierSpec& classifier,
                                                   std::uint64_t seed, unsigned threads = 0) {
  data.validate();
  const std::vector<GridCell> cells = grid.expand();
  Rng rng(seed);
  const std::vector<std::vector<std::size_t>> fold_sets =
      stratified_folds(data.labels, folds, rng);
  GridSearchResult result;
  result.cell_accuracies.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const PipelineEvaluator evaluator(data, cells[c], classifier, threads);
    double total = 0.0;
    for (std::size_t f = 0; f < fold_sets.size(); ++f) {
      std::vector<std::size_t> train;
      for (std::size_t g = 0; g < fold_sets.size(); ++g)
        if (g != f) train.insert(train.end(), fold_sets[g].begin(), fold_sets[g].end());
      std::sort(train.begin(), train.end());
      total += evaluator.split_accuracy(train, fold_sets[f]);
    }
    const double mean = total / static_cast<double>(fold_sets.size());
    result.cell_accuracies.push_back(mean);
    if (c == 0 || mean > result.best_accuracy) {
      result.best_accuracy = mean;
      result.best = cells[c];
      result.best_index = c;
    }
  }
  return result;
}

struct EvalResult {
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;
};

/// R resampled stratified splits; reports per-repetition accuracies, their
/// mean, and the sample standard deviation (0 when R = 1).
inline EvalResult evaluate(const LabeledDataset& data, const GridCell& cell,
                           const ClassifierSpec& classifier, int repetitions,
                           double train_fraction, std::uint64_t seed, unsigned threads = 0) {
  if (repetitions < 1) throw std::invalid_argument("evaluate: repetitions must be >= 1");
  const PipelineEvaluator evaluator(data, cell, classifier, threads);
  Rng rng(seed);
  EvalResult result;
  result.accuracies.reserve(static_cast<std::size_t>(repetitions));
  for (int r = 0; r < repetitions; ++r) {
    const auto [train, test] = stratified_split(data.labels, train_fraction, rng);
    result.accuracies.push_back(evaluator.split_accuracy(train, test));
  }
  double total = 0.0;
  for (double a : result.accuracies) total += a;
  result.mean = total / static_cast<double>(repetitions);
  if (repetitions > 1) {
    double ss = 0.0;
    for (double a : result.accuracies) ss += (a - result.mean) * (a - result.mean);
    result.stddev = std::sqrt(ss / static_cast<double>(repetitions - 1));
  }
  return result;
}

}  // namespace persig
