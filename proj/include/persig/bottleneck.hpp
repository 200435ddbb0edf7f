#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "persig/barcode.hpp"

namespace persig {

namespace detail {

/// Matching cost between two intervals: l-infinity distance of endpoint pairs.
inline double pair_cost(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

/// Cost of sending an interval to the diagonal.
inline double diagonal_cost(const Interval& a) { return 0.5 * (a.death - a.birth); }

/// Feasibility of a perfect matching at threshold eps in the standard
/// augmented bipartite graph: left = A-intervals plus one diagonal slot per
/// B-interval, right = B-intervals plus one diagonal slot per A-interval.
/// Diagonal slots match each other freely; an interval reaches its own
/// diagonal slot when its half-length is within eps.
class BottleneckMatcher {
public:
  BottleneckMatcher(const std::vector<Interval>& a, const std::vector<Interval>& b)
      : a_(a), b_(b), na_(a.size()), nb_(b.size()) {}

  bool feasible(double eps) const {
    const std::size_t left = na_ + nb_;
    const std::size_t right = nb_ + na_;
    std::vector<int> match_right(right, -1);
    std::vector<char> visited(right, 0);
    std::size_t matched = 0;
    std::function<bool(std::size_t)> augment = [&](std::size_t l) -> bool {
      for (std::size_t r = 0; r < right; ++r) {
        if (visited[r] || !edge(l, r, eps)) continue;
        visited[r] = 1;
        if (match_right[r] < 0 || augment(static_cast<std::size_t>(match_right[r]))) {
          match_right[r] = static_cast<int>(l);
          return true;
        }
      }
      return false;
    };
    for (std::size_t l = 0; l < left; ++l) {
      std::fill(visited.begin(), visited.end(), 0);
      if (augment(l)) ++matched;
    }
    return matched == left;
  }

private:
  bool edge(std::size_t l, std::size_t r, double eps) const {
    const bool l_diag = l >= na_;
    const bool r_diag = r >= nb_;
    if (l_diag && r_diag) return true;
    if (!l_diag && !r_diag) return pair_cost(a_[l], b_[r]) <= eps;
    if (!l_diag) return r == nb_ + l && diagonal_cost(a_[l]) <= eps;
    return r == l - na_ && diagonal_cost(b_[r]) <= eps;
  }

  const std::vector<Interval>& a_;
  const std::vector<Interval>& b_;
  std::size_t na_;
  std::size_t nb_;
};

}  // namespace detail

/// Exact bottleneck distance between the dim-intervals of two tame barcodes:
/// binary search over the finite candidate-cost set (all pairwise endpoint
/// costs and all half-lengths) with augmenting-path matching feasibility.
inline double bottleneck_distance(const Barcode& b1, const Barcode& b2, int dim) {
  const std::vector<Interval>& a = b1.intervals(dim);
  const std::vector<Interval>& b = b2.intervals(dim);
  if (a.empty() && b.empty()) return 0.0;

  std::vector<double> candidates{0.0};
  for (const Interval& ia : a)
    for (const Interval& ib : b) candidates.push_back(detail::pair_cost(ia, ib));
  for (const Interval& iv : a) candidates.push_back(detail::diagonal_cost(iv));
  for (const Interval& iv : b) candidates.push_back(detail::diagonal_cost(iv));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  detail::BottleneckMatcher matcher(a, b);
  std::size_t lo = 0, hi = candidates.size() - 1;
  // The largest candidate (everything to the diagonal or matched) is feasible.
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return candidates[lo];
}

}  // namespace persig
