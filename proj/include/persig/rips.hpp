#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "persig/barcode.hpp"
#include "persig/coefficients.hpp"
#include "persig/path.hpp"

namespace persig {

/// Symmetric nonnegative matrix with zero diagonal; full storage.
class DistanceMatrix {
public:
  DistanceMatrix(std::vector<double> entries, std::size_t size)
      : entries_(std::move(entries)), size_(size) {
    if (size_ == 0) throw std::invalid_argument("DistanceMatrix: empty");
    if (entries_.size() != size_ * size_)
      throw std::invalid_argument("DistanceMatrix: entry count must be size*size");
    for (std::size_t i = 0; i < size_; ++i) {
      if ((*this)(i, i) != 0.0) throw std::invalid_argument("DistanceMatrix: nonzero diagonal");
      for (std::size_t j = 0; j < i; ++j) {
        if ((*this)(i, j) < 0.0) throw std::invalid_argument("DistanceMatrix: negative entry");
        if (std::abs((*this)(i, j) - (*this)(j, i)) > 1e-12)
          throw std::invalid_argument("DistanceMatrix: asymmetric");
      }
    }
  }

  static DistanceMatrix from_points(const std::vector<std::vector<double>>& points) {
    const std::size_t m = points.size();
    if (m == 0) throw std::invalid_argument("DistanceMatrix: no points");
    const std::size_t d = points[0].size();
    for (const auto& p : points)
      if (p.size() != d) throw std::invalid_argument("DistanceMatrix: ragged point cloud");
    std::vector<double> entries(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = points[i][k] - points[j][k];
          acc += diff * diff;
        }
        const double dist = std::sqrt(acc);
        entries[i * m + j] = dist;
        entries[j * m + i] = dist;
      }
    return DistanceMatrix(std::move(entries), m);
  }

  double operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
  std::size_t size() const { return size_; }

private:
  std::vector<double> entries_;
  std::size_t size_;
};

struct Simplex {
  std::vector<int> vertices;  // ascending
  double filtration = 0.0;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Simplices sorted by (filtration, dimension, lexicographic vertices); the
/// prefix up to any filtration value is a simplicial complex.
class FilteredComplex {
public:
  FilteredComplex(std::vector<Simplex> simplices, int max_homology_dim, double max_scale)
      : simplices_(std::move(simplices)),
        max_homology_dim_(max_homology_dim),
        max_scale_(max_scale) {}

  const std::vector<Simplex>& simplices() const { return simplices_; }
  int max_homology_dim() const { return max_homology_dim_; }
  double max_scale() const { return max_scale_; }

  int top_dimension() const {
    int best = -1;
    for (const Simplex& s : simplices_) best = std::max(best, s.dim());
    return best;
  }

  std::vector<double> distinct_filtration_values() const {
    std::vector<double> values;
    values.reserve(simplices_.size());
    for (const Simplex& s : simplices_) values.push_back(s.filtration);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  }

private:
  std::vector<Simplex> simplices_;
  int max_homology_dim_;
  double max_scale_;
};

namespace detail {

inline bool simplex_order(const Simplex& a, const Simplex& b) {
  if (a.filtration != b.filtration) return a.filtration < b.filtration;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

struct VertexVectorHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// All simplices up to dimension max_dim + 1 (one above the top homology
/// dimension, needed to kill max_dim-cycles) with filtration value
/// max pairwise distance <= max_scale.
inline FilteredComplex build_rips(const DistanceMatrix& d, int max_dim, double max_scale) {
  if (max_dim < 0) throw std::invalid_argument("build_rips: max_dim must be >= 0");
  if (!(max_scale > 0.0)) throw std::invalid_argument("build_rips: max_scale must be > 0");
  const int m = static_cast<int>(d.size());
  const int top = max_dim + 1;

  std::vector<Simplex> simplices;
  for (int v = 0; v < m; ++v) simplices.push_back(Simplex{{v}, 0.0});

  // Grow cliques by appending vertices larger than the current maximum.
  std::vector<Simplex> frontier = simplices;
  for (int dim = 1; dim <= top && !frontier.empty(); ++dim) {
    std::vector<Simplex> next;
    for (const Simplex& s : frontier) {
      for (int v = s.vertices.back() + 1; v < m; ++v) {
        double filt = s.filtration;
        bool ok = true;
        for (int u : s.vertices) {
          const double duv = d(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
          if (duv > max_scale) {
            ok = false;
            break;
          }
          filt = std::max(filt, duv);
        }
        if (!ok) continue;
        Simplex grown;
        grown.vertices = s.vertices;
        grown.vertices.push_back(v);
        grown.filtration = filt;
        next.push_back(std::move(grown));
      }
    }
    simplices.insert(simplices.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(simplices.begin(), simplices.end(), detail::simplex_order);
  return FilteredComplex(std::move(simplices), max_dim, max_scale);
}

/// Barcode of the filtration via standard column reduction over the
/// two-element field. Intervals are emitted for dimensions 0..max_homology_dim;
/// essential classes are clamped to [birth, max_scale).
inline Barcode persistence(const FilteredComplex& k) {
  const auto& simplices = k.simplices();
  const std::size_t n = simplices.size();

  std::unordered_map<std::vector<int>, int, detail::VertexVectorHash> index_of;
  index_of.reserve(n * 2);
  for (std::size_t j = 0; j < n; ++j) index_of.emplace(simplices[j].vertices, static_cast<int>(j));

  Barcode barcode(k.max_scale());
  std::vector<std::vector<int>> reduced(n);
  std::vector<int> pair_of_low(n, -1);   // row index -> column that has it as low
  std::vector<char> is_creator(n, 0);

  std::vector<int> column;
  std::vector<int> merged;
  for (std::size_t j = 0; j < n; ++j) {
    const Simplex& s = simplices[j];
    column.clear();
    if (s.dim() > 0) {
      std::vector<int> face(s.vertices.begin(), s.vertices.end() - 1);
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        face.assign(s.vertices.begin(), s.vertices.end());
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        column.push_back(index_of.at(face));
      }
      std::sort(column.begin(), column.end());
    }
    while (!column.empty()) {
      const int low = column.back();
      const int partner = pair_of_low[static_cast<std::size_t>(low)];
      if (partner < 0) break;
      // Symmetric difference with the reduced column that owns this low.
      const std::vector<int>& other = reduced[static_cast<std::size_t>(partner)];
      merged.clear();
      std::set_symmetric_difference(column.begin(), column.end(), other.begin(), other.end(),
                                    std::back_inserter(merged));
      column.swap(merged);
    }
    if (!column.empty()) {
      const int low = column.back();
      pair_of_low[static_cast<std::size_t>(low)] = static_cast<int>(j);
      reduced[j] = column;
      const Simplex& creator = simplices[static_cast<std::size_t>(low)];
      if (creator.dim() <= k.max_homology_dim() && creator.filtration < s.filtration)
        barcode.add(creator.dim(), Interval{creator.filtration, s.filtration});
    } else {
      is_creator[j] = 1;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_creator[j] || pair_of_low[j] >= 0) continue;
    const Simplex& s = simplices[j];
    if (s.dim() <= k.max_homology_dim()) barcode.add_essential(s.dim(), s.filtration);
  }
  return barcode;
}

/// 0-dimensional persistence by single-linkage union-find; cross-check for
/// the matrix reduction.
inline Barcode h0_union_find(const DistanceMatrix& d, double max_scale) {
  const std::size_t m = d.size();
  struct Edge {
    double w;
    int a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (d(i, j) <= max_scale) edges.push_back({d(i, j), static_cast<int>(i), static_cast<int>(j)});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return x.w != y.w ? x.w < y.w : std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  std::vector<int> parent(m);
  for (std::size_t i = 0; i < m; ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  Barcode barcode(max_scale);
  for (const Edge& e : edges) {
    const int ra = find(e.a);
    const int rb = find(e.b);
    if (ra == rb) continue;
    // Elder rule: the larger root index dies (all births are 0 here).
    const int dying = std::max(ra, rb);
    const int living = std::min(ra, rb);
    parent[static_cast<std::size_t>(dying)] = living;
    if (0.0 < e.w) barcode.add(0, Interval{0.0, e.w});
  }
  for (std::size_t i = 0; i < m; ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) barcode.add_essential(0, 0.0);
  return barcode;
}

/// Path through (t_j, sum_k a^k_i * #{i-simplices with filtration <= t_j}) at
/// all distinct filtration values, linearly interpolated.
inline PiecewiseLinearPath simplex_embedding(const FilteredComplex& k,
                                             const CoefficientTable& a) {
  const std::vector<double> knots = k.distinct_filtration_values();
  const int n = a.output_dimension();
  if (knots.empty()) {
    return PiecewiseLinearPath({0.0}, std::vector<double>(static_cast<std::size_t>(n), 0.0), n);
  }
  std::vector<double> values;
  values.reserve(knots.size() * static_cast<std::size_t>(n));
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::size_t next_simplex = 0;
  const auto& simplices = k.simplices();
  for (double t : knots) {
    while (next_simplex < simplices.size() && simplices[next_simplex].filtration <= t) {
      const int dim = simplices[next_simplex].dim();
      for (int row = 0; row < n; ++row) acc[static_cast<std::size_t>(row)] += a.coeff(row, dim);
      ++next_simplex;
    }
    values.insert(values.end(), acc.begin(), acc.end());
  }
  std::vector<double> times = knots;
  return PiecewiseLinearPath(std::move(times), std::move(values), n);
}

/// Euler characteristic curve from alternating simplex counts; no homology.
inline PiecewiseLinearPath euler_curve_counts(const FilteredComplex& k) {
  return simplex_embedding(k, CoefficientTable::euler(std::max(k.top_dimension(), 0)));
}

}  // namespace persig
