#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/barcode.hpp"
#include "persig/common.hpp"
#include "persig/embeddings.hpp"
#include "persig/path.hpp"

namespace persig {

/// Static kernel kappa on path values. Linear recovers the plain signature
/// kernel; rbf lifts values through the Gaussian feature map before the
/// signature is taken (the lift is never materialized).
struct StaticKernel {
  enum class Kind { Linear, Rbf };

  Kind kind = Kind::Linear;
  double sigma = 1.0;

  static StaticKernel linear() { return StaticKernel{Kind::Linear, 1.0}; }

  static StaticKernel rbf(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("StaticKernel: rbf sigma must be > 0");
    return StaticKernel{Kind::Rbf, sigma};
  }

  double operator()(std::span<const double> u, std::span<const double> v) const {
    switch (kind) {
    case Kind::Linear:
      return dot(u, v);
    case Kind::Rbf: {
      double sq = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        sq += d * d;
      }
      return std::exp(-sq / (2.0 * sigma * sigma));
    }
    }
    return 0.0;
  }

  std::string name() const { return kind == Kind::Linear ? "linear" : "rbf"; }
};

namespace detail {

/// Knot values with stationary knots (zero increment) removed.
inline std::vector<std::vector<double>> moving_knots(const PiecewiseLinearPath& x) {
  std::vector<std::vector<double>> knots;
  knots.reserve(x.knot_count());
  for (std::size_t i = 0; i < x.knot_count(); ++i) {
    std::vector<double> v(x.knot_value(i).begin(), x.knot_value(i).end());
    if (knots.empty() || v != knots.back()) knots.push_back(std::move(v));
  }
  return knots;
}

}  // namespace detail

/// Level-M truncated signature kernel <S(x), S(y)> of the kappa-lifted paths,
/// via dynamic programming over the static-kernel increment matrix
///   delta[p][q] = kappa(x_{p+1}, y_{q+1}) - kappa(x_{p+1}, y_q)
///               - kappa(x_p, y_{q+1}) + kappa(x_p, y_q).
///
/// Expanding both signatures over segments writes the level-m inner product
/// as a sum over pairs of weakly increasing index sequences
/// (p_1 <= ... <= p_m), (q_1 <= ... <= q_m) of prod_k delta[p_k][q_k], each
/// weighted by 1/prod(run lengths)! on both sides (the factorials of the
/// segment exponentials). The DP extends sequences one position at a time,
/// keeping the current tail-run lengths (u, v) so the factorial weights
/// accumulate incrementally; prefix sums make each level O(l^2 M). The result
/// is exact for piecewise linear paths, which criterion-tested against the
/// brute-force tensor inner product.
inline double sig_kernel(const PiecewiseLinearPath& x, const PiecewiseLinearPath& y, int M,
                         const StaticKernel& kappa) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("sig_kernel: dimension mismatch");
  if (M < 0) throw std::invalid_argument("sig_kernel: M must be >= 0");
  const auto xs = detail::moving_knots(x);
  const auto ys = detail::moving_knots(y);
  const std::size_t P = xs.size() - 1;
  const std::size_t Q = ys.size() - 1;
  if (M == 0 || P == 0 || Q == 0) return 1.0;

  // Static-kernel values on the knot grid, then second-order differences.
  std::vector<double> kv((P + 1) * (Q + 1));
  for (std::size_t i = 0; i <= P; ++i)
    for (std::size_t j = 0; j <= Q; ++j) kv[i * (Q + 1) + j] = kappa(xs[i], ys[j]);
  std::vector<double> delta(P * Q);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q)
      delta[p * Q + q] = kv[(p + 1) * (Q + 1) + (q + 1)] - kv[(p + 1) * (Q + 1) + q] -
                         kv[p * (Q + 1) + (q + 1)] + kv[p * (Q + 1) + q];

  // A[(p*Q + q)*m*m + (u-1)*m + (v-1)]: weighted sequences of the current
  // length ending at segments (p, q) with tail runs (u, v).
  const std::size_t cells = P * Q;
  std::vector<double> prev(cells, 0.0);  // level 1: runs are (1,1)
  double total = 1.0;
  for (std::size_t c = 0; c < cells; ++c) {
    prev[c] = delta[c];
    total += prev[c];
  }

  std::vector<double> cur;
  std::vector<double> cell_total(cells);
  std::vector<double> row_tail;   // sum over u of prev at fixed (p, q, v)
  std::vector<double> col_tail;   // sum over v of prev at fixed (p, q, u)
  for (int m = 2; m <= M; ++m) {
    const std::size_t pm = static_cast<std::size_t>(m - 1);  // run bound of prev level
    const std::size_t cm = static_cast<std::size_t>(m);

    // Totals per cell and tail-run marginals of the previous level.
    row_tail.assign(cells * pm, 0.0);
    col_tail.assign(cells * pm, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
      double t = 0.0;
      for (std::size_t u = 0; u < pm; ++u)
        for (std::size_t v = 0; v < pm; ++v) {
          const double a = prev[c * pm * pm + u * pm + v];
          t += a;
          row_tail[c * pm + v] += a;
          col_tail[c * pm + u] += a;
        }
      cell_total[c] = t;
    }

    // strict2[p][q] = sum of cell totals over p' < p, q' < q.
    std::vector<double> strict2(cells, 0.0);
    {
      std::vector<double> col_sums(Q, 0.0);  // per q: totals over rows p' < p
      for (std::size_t p = 0; p < P; ++p) {
        double row_cum = 0.0;
        for (std::size_t q = 0; q < Q; ++q) {
          strict2[p * Q + q] = row_cum;
          row_cum += col_sums[q];
        }
        for (std::size_t q = 0; q < Q; ++q) col_sums[q] += cell_total[p * Q + q];
      }
    }

    // strict_p[p][q][v] = sum over p' < p of row_tail[p'][q][v].
    std::vector<double> strict_p(cells * pm, 0.0);
    for (std::size_t q = 0; q < Q; ++q)
      for (std::size_t v = 0; v < pm; ++v) {
        double running = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
          strict_p[(p * Q + q) * pm + v] = running;
          running += row_tail[(p * Q + q) * pm + v];
        }
      }
    // strict_q[p][q][u] = sum over q' < q of col_tail[p][q'][u].
    std::vector<double> strict_q(cells * pm, 0.0);
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t u = 0; u < pm; ++u) {
        double running = 0.0;
        for (std::size_t q = 0; q < Q; ++q) {
          strict_q[(p * Q + q) * pm + u] = running;
          running += col_tail[(p * Q + q) * pm + u];
        }
      }

    cur.assign(cells * cm * cm, 0.0);
    for (std::size_t c = 0; c < cells; ++c) {
      const double d = delta[c];
      if (d == 0.0) continue;
      double* slab = cur.data() + c * cm * cm;
      // Fresh runs on both sides: previous position strictly below in both.
      slab[0] = d * strict2[c];
      // Fresh x-run, continued y-run of length v.
      for (std::size_t v = 2; v <= cm; ++v)
        slab[v - 1] = d / static_cast<double>(v) * strict_p[c * pm + (v - 2)];
      // Continued x-run, fresh y-run.
      for (std::size_t u = 2; u <= cm; ++u)
        slab[(u - 1) * cm] = d / static_cast<double>(u) * strict_q[c * pm + (u - 2)];
      // Both runs continue: same cell, both run lengths grow by one.
      const double* prev_slab = prev.data() + c * pm * pm;
      for (std::size_t u = 2; u <= cm; ++u)
        for (std::size_t v = 2; v <= cm; ++v)
          slab[(u - 1) * cm + (v - 1)] = d / static_cast<double>(u * v) *
                                         prev_slab[(u - 2) * pm + (v - 2)];
    }
    for (double a : cur) total += a;
    prev.swap(cur);
  }
  return total;
}

/// Gram matrix metadata recorded alongside kernel evaluations.
struct GramMetadata {
  std::string embedding;
  int dim = 0;
  int M = 0;
  int tau = 0;
  std::vector<double> lags;
  std::string kappa = "linear";
  double sigma = 0.0;
  int envelope_N = 0;
};

/// Symmetric matrix of signature-kernel evaluations.
class GramMatrix {
public:
  GramMatrix(std::size_t size, GramMetadata meta)
      : size_(size), values_(size * size, 0.0), meta_(std::move(meta)) {}

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * size_ + j] = v;
    values_[j * size_ + i] = v;
  }
  const GramMetadata& metadata() const { return meta_; }

  /// Largest |G_ij - G_ji|; zero by construction here.
  double asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < size_; ++i)
      for (std::size_t j = i + 1; j < size_; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < size_; ++i) t += (*this)(i, i);
    return t;
  }

private:
  std::size_t size_;
  std::vector<double> values_;
  GramMetadata meta_;
};

/// Pairwise signature kernels; the upper triangle is computed once and
/// mirrored. Pairs are independent, so assembly parallelizes without
/// affecting the result.
inline GramMatrix gram(const std::vector<PiecewiseLinearPath>& paths, int M,
                       const StaticKernel& kappa, GramMetadata meta = {},
                       unsigned threads = 0) {
  if (paths.empty()) throw std::invalid_argument("gram: empty path list");
  const int n = paths.front().dimension();
  for (const auto& p : paths)
    if (p.dimension() != n) throw std::invalid_argument("gram: mixed path dimensions");
  meta.M = M;
  meta.kappa = kappa.name();
  meta.sigma = kappa.kind == StaticKernel::Kind::Rbf ? kappa.sigma : 0.0;
  const std::size_t N = paths.size();
  GramMatrix g(N, std::move(meta));
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  jobs.reserve(N * (N + 1) / 2);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) jobs.emplace_back(i, j);
  parallel_for(
      jobs.size(),
      [&](std::size_t idx) {
        const auto [i, j] = jobs[idx];
        g.set(i, j, sig_kernel(paths[i], paths[j], M, kappa));
      },
      threads);
  return g;
}

/// Hyperparameters pi = {M, tau, Delta, kappa, N} of a parametrised feature
/// map. The nonlinearity is realized exclusively through kappa.
struct PipelineParams {
  int M = 2;
  bool time_aug = false;         // tau
  std::vector<double> lags;      // Delta
  StaticKernel kappa = StaticKernel::linear();
  int envelope_N = 0;            // restricted envelope truncation; 0 = unrestricted
  bool sigma_from_median = false;  // rbf lengthscale from the training median heuristic
};

/// Embedding followed by the path augmentations of pi: optional time
/// augmentation, then lags. kappa and M are consumed by sig_kernel.
inline PiecewiseLinearPath kernelized_feature_pipeline(const Barcode& b,
                                                       const EmbeddingSpec& spec,
                                                       const PipelineParams& params) {
  EmbeddingSpec effective = spec;
  if (params.envelope_N > 0 && spec.kind == EmbeddingKind::Envelope)
    effective.N = params.envelope_N;
  PiecewiseLinearPath path = embed(b, effective);
  if (params.time_aug) path = time_augment(path);
  if (!params.lags.empty()) path = add_lags(path, params.lags);
  return path;
}

/// Median pairwise distance between knot values across a path collection;
/// the default rbf lengthscale.
inline double median_pairwise_distance(const std::vector<PiecewiseLinearPath>& paths) {
  std::vector<std::vector<double>> values;
  for (const auto& p : paths)
    for (std::size_t i = 0; i < p.knot_count(); ++i)
      values.emplace_back(p.knot_value(i).begin(), p.knot_value(i).end());
  std::vector<double> dists;
  dists.reserve(values.size() * (values.size() - 1) / 2);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      dists.push_back(vector_distance(values[i], values[j], VectorNorm::L2));
  if (dists.empty()) return 1.0;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2),
                   dists.end());
  const double median = dists[dists.size() / 2];
  return median > 0.0 ? median : 1.0;
}

}  // namespace persig
