#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/barcode.hpp"
#include "persig/coefficients.hpp"
#include "persig/path.hpp"

namespace persig {

namespace detail {

/// Tent function of the interval [b, d): peak ((b+d)/2, (d-b)/2).
inline double tent_value(const Interval& iv, double t) {
  return std::max(0.0, std::min(t - iv.birth, iv.death - t));
}

/// Times at which some pair of tent segments can cross or kink: births,
/// deaths, and all mixed midpoints (b_i + d_j)/2. Between consecutive
/// candidates every tent is linear and their pointwise order is constant,
/// so each k-th largest envelope is linear there.
inline std::vector<double> landscape_grid(const std::vector<Interval>& intervals,
                                          double horizon) {
  std::vector<double> grid{0.0, horizon};
  for (const Interval& a : intervals) {
    grid.push_back(a.birth);
    grid.push_back(a.death);
    for (const Interval& b : intervals) grid.push_back(0.5 * (a.birth + b.death));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.front() < 0.0) grid.erase(grid.begin());
  while (!grid.empty() && grid.back() > horizon) grid.pop_back();
  if (grid.empty()) grid.push_back(0.0);
  return grid;
}

}  // namespace detail

/// The first K landscape functions lambda_1 >= ... >= lambda_K >= 0 of a
/// barcode, stored exactly as piecewise linear functions on a common grid.
class LandscapeFamily {
public:
  LandscapeFamily(std::vector<double> grid, std::vector<std::vector<double>> values)
      : grid_(std::move(grid)), values_(std::move(values)) {}

  int count() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& level(int k) const { return values_[static_cast<std::size_t>(k)]; }

  /// lambda_{k+1}(t); zero outside the grid and for k >= count().
  double value(int k, double t) const {
    if (k >= count()) return 0.0;
    if (grid_.size() == 1) return t == grid_[0] ? values_[static_cast<std::size_t>(k)][0] : 0.0;
    if (t <= grid_.front() || t >= grid_.back()) {
      // Compact support: endpoint values are zero by construction.
      if (t == grid_.front()) return values_[static_cast<std::size_t>(k)].front();
      if (t == grid_.back()) return values_[static_cast<std::size_t>(k)].back();
      return 0.0;
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid_[lo]) / (grid_[hi] - grid_[lo]);
    const auto& vals = values_[static_cast<std::size_t>(k)];
    return vals[lo] + w * (vals[hi] - vals[lo]);
  }

private:
  std::vector<double> grid_;
  std::vector<std::vector<double>> values_;  // values_[k][grid index]
};

/// Largest Betti number of B_dim over all scales; the number of nonzero
/// landscape functions.
inline int max_betti(const Barcode& b, int dim) {
  const auto& intervals = b.intervals(dim);
  int best = 0;
  for (const Interval& probe : intervals) {
    int count = 0;
    for (const Interval& iv : intervals)
      if (iv.contains(probe.birth)) ++count;
    best = std::max(best, count);
  }
  return best;
}

/// Exact landscapes lambda_1..lambda_K via the tent sweep: each interval
/// contributes the tent peaking at ((b+d)/2, (d-b)/2), and lambda_k is the
/// k-th largest envelope of the tents (zero where fewer than k are positive).
inline LandscapeFamily landscape(const Barcode& b, int dim, int K) {
  if (K < 1) throw std::invalid_argument("landscape: K must be >= 1");
  const auto& intervals = b.intervals(dim);
  std::vector<double> grid = detail::landscape_grid(intervals, b.horizon());
  std::vector<std::vector<double>> values(static_cast<std::size_t>(K),
                                          std::vector<double>(grid.size(), 0.0));
  std::vector<double> heights;
  heights.reserve(intervals.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    heights.clear();
    for (const Interval& iv : intervals) heights.push_back(detail::tent_value(iv, grid[g]));
    std::sort(heights.begin(), heights.end(), std::greater<double>());
    for (int k = 0; k < K && k < static_cast<int>(heights.size()); ++k)
      values[static_cast<std::size_t>(k)][g] = std::max(0.0, heights[static_cast<std::size_t>(k)]);
  }
  return LandscapeFamily(std::move(grid), std::move(values));
}

/// Path whose k-th coordinate is lambda_k, on [0, horizon].
inline PiecewiseLinearPath landscape_embed(const Barcode& b, int dim, int K) {
  const LandscapeFamily family = landscape(b, dim, K);
  const auto& grid = family.grid();
  std::vector<double> values;
  values.reserve(grid.size() * static_cast<std::size_t>(K));
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (int k = 0; k < K; ++k) values.push_back(family.level(k)[g]);
  return PiecewiseLinearPath(grid, std::move(values), K);
}

/// Running integrals of the landscape functions, delivered as a piecewise
/// linear path on the landscape grid refined `refinement`-fold. Knot values
/// are exact integrals (trapezoid rule is exact for linear pieces); only the
/// between-knot shape is linearized.
inline PiecewiseLinearPath integrated_landscape_embed(const Barcode& b, int dim, int K,
                                                      int refinement = 4) {
  if (refinement < 1)
    throw std::invalid_argument("integrated_landscape_embed: refinement must be >= 1");
  const LandscapeFamily family = landscape(b, dim, K);
  const auto& grid = family.grid();
  std::vector<double> times;
  if (grid.size() == 1) {
    times = grid;
  } else {
    for (std::size_t g = 0; g + 1 < grid.size(); ++g)
      for (int r = 0; r < refinement; ++r) {
        const double w = static_cast<double>(r) / refinement;
        times.push_back(grid[g] + w * (grid[g + 1] - grid[g]));
      }
    times.push_back(grid.back());
  }
  std::vector<double> values(times.size() * static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k) {
    double integral = 0.0;
    double prev_t = times.front();
    double prev_v = family.value(k, prev_t);
    values[static_cast<std::size_t>(k)] = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      const double t = times[i];
      const double v = family.value(k, t);
      integral += 0.5 * (prev_v + v) * (t - prev_t);
      values[i * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] = integral;
      prev_t = t;
      prev_v = v;
    }
  }
  return PiecewiseLinearPath(std::move(times), std::move(values), K);
}

/// sup over k and t of |lambda^a_k - lambda^b_k|; exact via the union grid.
inline double landscape_sup_distance(const LandscapeFamily& a, const LandscapeFamily& b) {
  std::vector<double> grid(a.grid());
  grid.insert(grid.end(), b.grid().begin(), b.grid().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const int K = std::max(a.count(), b.count());
  double best = 0.0;
  for (int k = 0; k < K; ++k)
    for (double t : grid) best = std::max(best, std::abs(a.value(k, t) - b.value(k, t)));
  return best;
}

/// Exact 1-Hoelder l-infinity distance between the true (piecewise quadratic)
/// integrated landscape embeddings. The difference has derivative
/// lambda^a - lambda^b, linear between union grid points, so the supremum of
/// difference quotients is the largest derivative magnitude at a grid point.
/// Both integrated paths start at 0, so the ||x(0)|| term vanishes.
inline double integrated_landscape_holder_distance(const LandscapeFamily& a,
                                                   const LandscapeFamily& b) {
  return landscape_sup_distance(a, b);
}

namespace detail {

/// Sort for the envelope and naive embeddings: length descending, then birth
/// ascending, then death ascending; stable, so equal intervals keep input
/// order.
inline std::vector<Interval> sorted_by_length(const std::vector<Interval>& intervals) {
  std::vector<Interval> sorted(intervals);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Interval& x, const Interval& y) {
    if (x.length() != y.length()) return x.length() > y.length();
    if (x.birth != y.birth) return x.birth < y.birth;
    return x.death < y.death;
  });
  return sorted;
}

}  // namespace detail

/// Two-dimensional path i -> (b_i, d_i) over intervals sorted by length, with
/// (0,0) prepended; domain [0, m].
inline PiecewiseLinearPath envelope_embed(const Barcode& b, int dim) {
  const std::vector<Interval> sorted = detail::sorted_by_length(b.intervals(dim));
  const std::size_t m = sorted.size();
  if (m == 0) return PiecewiseLinearPath({0.0}, {0.0, 0.0}, 2);
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(m + 1);
  values.reserve(2 * (m + 1));
  times.push_back(0.0);
  values.push_back(0.0);
  values.push_back(0.0);
  for (std::size_t i = 0; i < m; ++i) {
    times.push_back(static_cast<double>(i + 1));
    values.push_back(sorted[i].birth);
    values.push_back(sorted[i].death);
  }
  return PiecewiseLinearPath(std::move(times), std::move(values), 2);
}

/// Envelope frozen at its value at time N; domain still [0, m].
inline PiecewiseLinearPath restricted_envelope_embed(const Barcode& b, int dim, int N) {
  if (N < 1) throw std::invalid_argument("restricted_envelope_embed: N must be >= 1");
  const PiecewiseLinearPath envelope = envelope_embed(b, dim);
  const std::size_t knots = envelope.knot_count();
  std::vector<double> values;
  values.reserve(knots * 2);
  const std::size_t freeze = std::min<std::size_t>(static_cast<std::size_t>(N), knots - 1);
  for (std::size_t i = 0; i < knots; ++i) {
    const auto v = envelope.knot_value(std::min(i, freeze));
    values.insert(values.end(), v.begin(), v.end());
  }
  return PiecewiseLinearPath(envelope.times(), std::move(values), 2);
}

/// m-dimensional path on [0, horizon]; coordinate i moves with unit speed
/// while the i-th longest interval is active. An empty barcode degenerates to
/// the constant one-dimensional zero path.
inline PiecewiseLinearPath naive_embed(const Barcode& b, int dim) {
  const std::vector<Interval> sorted = detail::sorted_by_length(b.intervals(dim));
  const double T = b.horizon();
  if (sorted.empty()) return PiecewiseLinearPath::constant(0.0, T, {0.0});
  std::vector<double> times{0.0, T};
  for (const Interval& iv : sorted) {
    times.push_back(iv.birth);
    times.push_back(iv.death);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const int n = static_cast<int>(sorted.size());
  std::vector<double> values;
  values.reserve(times.size() * static_cast<std::size_t>(n));
  for (double t : times)
    for (const Interval& iv : sorted)
      values.push_back(std::clamp(t - iv.birth, 0.0, iv.length()));
  return PiecewiseLinearPath(std::move(times), std::move(values), n);
}

/// Coordinate k at each knot is sum_i a^k_i * beta_i(t); knots at all
/// interval endpoints of all dimensions plus 0 and the horizon.
inline PiecewiseLinearPath generalized_betti_embed(const Barcode& b, const CoefficientTable& a) {
  std::vector<double> times{0.0, b.horizon()};
  for (int dim : b.dimensions())
    for (const Interval& iv : b.intervals(dim)) {
      times.push_back(iv.birth);
      times.push_back(iv.death);
    }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  const int n = a.output_dimension();
  const int max_dim = std::max(a.max_input_dimension(), b.max_dimension());
  std::vector<double> values;
  values.reserve(times.size() * static_cast<std::size_t>(n));
  for (double t : times)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i <= max_dim; ++i) {
        const double coeff = a.coeff(k, i);
        if (coeff != 0.0) acc += coeff * betti_count(b, i, t);
      }
      values.push_back(acc);
    }
  return PiecewiseLinearPath(std::move(times), std::move(values), n);
}

/// Coordinates (beta_0, ..., beta_{n-1}).
inline PiecewiseLinearPath betti_embed(const Barcode& b, int n) {
  return generalized_betti_embed(b, CoefficientTable::betti(n));
}

/// One-dimensional alternating sum of Betti numbers across all dimensions.
inline PiecewiseLinearPath euler_embed(const Barcode& b) {
  return generalized_betti_embed(b, CoefficientTable::euler(std::max(b.max_dimension(), 0)));
}

enum class EmbeddingKind {
  Landscape,
  IntegratedLandscape,
  Envelope,
  Naive,
  Betti,
  Euler,
  GeneralizedBetti,
};

inline EmbeddingKind parse_embedding_kind(const std::string& name) {
  if (name == "landscape") return EmbeddingKind::Landscape;
  if (name == "ilandscape") return EmbeddingKind::IntegratedLandscape;
  if (name == "envelope") return EmbeddingKind::Envelope;
  if (name == "naive") return EmbeddingKind::Naive;
  if (name == "betti") return EmbeddingKind::Betti;
  if (name == "euler") return EmbeddingKind::Euler;
  if (name == "gbetti") return EmbeddingKind::GeneralizedBetti;
  throw std::invalid_argument("unknown embedding: " + name);
}

inline std::string embedding_kind_name(EmbeddingKind kind) {
  switch (kind) {
  case EmbeddingKind::Landscape: return "landscape";
  case EmbeddingKind::IntegratedLandscape: return "ilandscape";
  case EmbeddingKind::Envelope: return "envelope";
  case EmbeddingKind::Naive: return "naive";
  case EmbeddingKind::Betti: return "betti";
  case EmbeddingKind::Euler: return "euler";
  case EmbeddingKind::GeneralizedBetti: return "gbetti";
  }
  return "?";
}

/// Which barcode-to-path map to apply, with its parameters.
struct EmbeddingSpec {
  EmbeddingKind kind = EmbeddingKind::Euler;
  int dim = 0;      // homological dimension for single-dimension embeddings
  int K = 0;        // landscape truncation; 0 = all nonzero landscapes
  int N = 0;        // restricted envelope; 0 = unrestricted
  int betti_n = 1;  // coordinates of the Betti embedding
  std::optional<CoefficientTable> coeffs;  // for GeneralizedBetti
};

inline PiecewiseLinearPath embed(const Barcode& b, const EmbeddingSpec& spec) {
  switch (spec.kind) {
  case EmbeddingKind::Landscape: {
    const int K = spec.K > 0 ? spec.K : std::max(max_betti(b, spec.dim), 1);
    return landscape_embed(b, spec.dim, K);
  }
  case EmbeddingKind::IntegratedLandscape: {
    const int K = spec.K > 0 ? spec.K : std::max(max_betti(b, spec.dim), 1);
    return integrated_landscape_embed(b, spec.dim, K);
  }
  case EmbeddingKind::Envelope:
    return spec.N > 0 ? restricted_envelope_embed(b, spec.dim, spec.N)
                      : envelope_embed(b, spec.dim);
  case EmbeddingKind::Naive:
    return naive_embed(b, spec.dim);
  case EmbeddingKind::Betti:
    return betti_embed(b, spec.betti_n);
  case EmbeddingKind::Euler:
    return euler_embed(b);
  case EmbeddingKind::GeneralizedBetti:
    if (!spec.coeffs) throw std::invalid_argument("embed: gbetti needs a coefficient table");
    return generalized_betti_embed(b, *spec.coeffs);
  }
  throw std::logic_error("embed: unreachable");
}

}  // namespace persig
