#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/common.hpp"

namespace persig {

/// Piecewise linear path: knot times t_0 < ... < t_l with values in R^n,
/// linearly interpolated between knots and extended constantly outside
/// [t_0, t_l]. A single knot gives a constant path. Stationary knots (zero
/// increment) are permitted.
class PiecewiseLinearPath {
public:
  /// `values` is row-major: knot i occupies [i*dimension, (i+1)*dimension).
  PiecewiseLinearPath(std::vector<double> times, std::vector<double> values, int dimension)
      : times_(std::move(times)), values_(std::move(values)), dimension_(dimension) {
    if (dimension_ < 1) throw std::invalid_argument("path: dimension must be >= 1");
    if (times_.empty()) throw std::invalid_argument("path: needs at least one knot");
    if (values_.size() != times_.size() * static_cast<std::size_t>(dimension_))
      throw std::invalid_argument("path: value count does not match knots x dimension");
    for (std::size_t i = 0; i + 1 < times_.size(); ++i)
      if (!(times_[i] < times_[i + 1]))
        throw std::invalid_argument("path: knot times must be strictly increasing");
  }

  static PiecewiseLinearPath constant(double t0, double t1, std::vector<double> value) {
    const int n = static_cast<int>(value.size());
    if (t0 == t1) return PiecewiseLinearPath({t0}, std::move(value), n);
    std::vector<double> doubled(value);
    doubled.insert(doubled.end(), value.begin(), value.end());
    return PiecewiseLinearPath({t0, t1}, std::move(doubled), n);
  }

  int dimension() const { return dimension_; }
  std::size_t knot_count() const { return times_.size(); }
  std::size_t segment_count() const { return times_.size() - 1; }
  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  const std::vector<double>& times() const { return times_; }

  std::span<const double> knot_value(std::size_t i) const {
    return {values_.data() + i * dimension_, static_cast<std::size_t>(dimension_)};
  }

  /// Value at time t; constant extension outside the domain.
  std::vector<double> evaluate(double t) const {
    if (t <= times_.front()) return value_vector(0);
    if (t >= times_.back()) return value_vector(times_.size() - 1);
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    std::vector<double> out(dimension_);
    for (int k = 0; k < dimension_; ++k) {
      const double a = values_[lo * dimension_ + k];
      const double b = values_[hi * dimension_ + k];
      out[k] = a + w * (b - a);
    }
    return out;
  }

  friend bool operator==(const PiecewiseLinearPath&, const PiecewiseLinearPath&) = default;

private:
  std::vector<double> value_vector(std::size_t i) const {
    return {values_.begin() + static_cast<std::ptrdiff_t>(i * dimension_),
            values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dimension_)};
  }

  std::vector<double> times_;
  std::vector<double> values_;  // knot-major
  int dimension_;
};

/// Total 1-variation ||x(0)|| + sum of segment increment norms; exact for
/// piecewise linear paths (the supremum is attained on the knot partition).
inline double one_variation(const PiecewiseLinearPath& x, VectorNorm norm) {
  double total = vector_norm(x.knot_value(0), norm);
  for (std::size_t i = 0; i + 1 < x.knot_count(); ++i)
    total += vector_distance(x.knot_value(i + 1), x.knot_value(i), norm);
  return total;
}

/// 1-Hoelder norm ||x(0)|| + max segment slope.
inline double holder1_norm(const PiecewiseLinearPath& x, VectorNorm norm) {
  double slope = 0.0;
  for (std::size_t i = 0; i + 1 < x.knot_count(); ++i) {
    const double dt = x.times()[i + 1] - x.times()[i];
    slope = std::max(slope, vector_distance(x.knot_value(i + 1), x.knot_value(i), norm) / dt);
  }
  return vector_norm(x.knot_value(0), norm) + slope;
}

/// t -> (t, x(t)); the time coordinate comes first.
inline PiecewiseLinearPath time_augment(const PiecewiseLinearPath& x) {
  std::vector<double> values;
  values.reserve(x.knot_count() * (x.dimension() + 1));
  for (std::size_t i = 0; i < x.knot_count(); ++i) {
    values.push_back(x.times()[i]);
    const auto v = x.knot_value(i);
    values.insert(values.end(), v.begin(), v.end());
  }
  return PiecewiseLinearPath(x.times(), std::move(values), x.dimension() + 1);
}

/// t -> (x(t), x(max(t - lag_1, t_0)), ..., x(max(t - lag_l, t_0))).
/// The knot set is the union of the original knots and their forward shifts,
/// clipped to the domain.
inline PiecewiseLinearPath add_lags(const PiecewiseLinearPath& x, std::span<const double> lags) {
  for (double lag : lags)
    if (lag < 0.0) throw std::invalid_argument("add_lags: lags must be nonnegative");
  if (lags.empty()) return x;
  std::vector<double> knots(x.times());
  for (double lag : lags)
    for (double t : x.times()) {
      const double shifted = t + lag;
      if (shifted <= x.end_time()) knots.push_back(shifted);
    }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  const int n = x.dimension();
  const int out_dim = n * static_cast<int>(lags.size() + 1);
  std::vector<double> values;
  values.reserve(knots.size() * out_dim);
  for (double t : knots) {
    const std::vector<double> head = x.evaluate(t);
    values.insert(values.end(), head.begin(), head.end());
    for (double lag : lags) {
      const std::vector<double> delayed = x.evaluate(std::max(t - lag, x.start_time()));
      values.insert(values.end(), delayed.begin(), delayed.end());
    }
  }
  return PiecewiseLinearPath(std::move(knots), std::move(values), out_dim);
}

/// y translated so y(start) coincides with x(end), time domains abutted.
inline PiecewiseLinearPath concatenate(const PiecewiseLinearPath& x,
                                       const PiecewiseLinearPath& y) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("concatenate: dimension mismatch");
  const int n = x.dimension();
  std::vector<double> times(x.times());
  std::vector<double> values;
  values.reserve((x.knot_count() + y.knot_count()) * n);
  for (std::size_t i = 0; i < x.knot_count(); ++i) {
    const auto v = x.knot_value(i);
    values.insert(values.end(), v.begin(), v.end());
  }
  const auto x_end = x.knot_value(x.knot_count() - 1);
  const auto y_start = y.knot_value(0);
  for (std::size_t i = 1; i < y.knot_count(); ++i) {
    times.push_back(x.end_time() + (y.times()[i] - y.start_time()));
    const auto v = y.knot_value(i);
    for (int k = 0; k < n; ++k) values.push_back(x_end[k] + (v[k] - y_start[k]));
  }
  return PiecewiseLinearPath(std::move(times), std::move(values), n);
}

/// Knots reversed, times reflected about the domain midpoint.
inline PiecewiseLinearPath time_reverse(const PiecewiseLinearPath& x) {
  const double t0 = x.start_time();
  const double t1 = x.end_time();
  const std::size_t m = x.knot_count();
  std::vector<double> times(m);
  std::vector<double> values;
  values.reserve(m * x.dimension());
  for (std::size_t i = 0; i < m; ++i) {
    times[i] = t0 + (t1 - x.times()[m - 1 - i]);
    const auto v = x.knot_value(m - 1 - i);
    values.insert(values.end(), v.begin(), v.end());
  }
  return PiecewiseLinearPath(std::move(times), std::move(values), x.dimension());
}

/// Pointwise x - y on the union of knot sets over the union of domains,
/// with both paths extended constantly outside their own domains.
inline PiecewiseLinearPath path_difference(const PiecewiseLinearPath& x,
                                           const PiecewiseLinearPath& y) {
  if (x.dimension() != y.dimension())
    throw std::invalid_argument("path_difference: dimension mismatch");
  std::vector<double> knots(x.times());
  knots.insert(knots.end(), y.times().begin(), y.times().end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> values;
  values.reserve(knots.size() * x.dimension());
  for (double t : knots) {
    const std::vector<double> a = x.evaluate(t);
    const std::vector<double> b = y.evaluate(t);
    for (int k = 0; k < x.dimension(); ++k) values.push_back(a[k] - b[k]);
  }
  return PiecewiseLinearPath(std::move(knots), std::move(values), x.dimension());
}

/// CSV with header `t,x1,...,xn`, one knot per row, full precision.
inline void save_path_csv(const PiecewiseLinearPath& x, std::ostream& out) {
  out << "# persig path v1\n";
  out << "t";
  for (int k = 1; k <= x.dimension(); ++k) out << ",x" << k;
  out << "\n";
  for (std::size_t i = 0; i < x.knot_count(); ++i) {
    out << format_double(x.times()[i]);
    for (double v : x.knot_value(i)) out << ',' << format_double(v);
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_path_csv: write failure");
}

namespace detail {

inline bool parse_csv_cell(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
  return end != begin && *end == '\0';
}

}  // namespace detail

inline PiecewiseLinearPath load_path_csv(std::istream& in) {
  std::vector<double> times;
  std::vector<double> values;
  int dimension = -1;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // header row `t,x1,...`
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      double v = 0.0;
      if (!detail::parse_csv_cell(cell, v))
        throw std::runtime_error("load_path_csv: bad number on line " + std::to_string(line_no));
      row.push_back(v);
    }
    if (row.size() < 2)
      throw std::runtime_error("load_path_csv: too few columns on line " + std::to_string(line_no));
    if (dimension < 0)
      dimension = static_cast<int>(row.size()) - 1;
    else if (row.size() != static_cast<std::size_t>(dimension) + 1)
      throw std::runtime_error("load_path_csv: ragged row on line " + std::to_string(line_no));
    times.push_back(row[0]);
    values.insert(values.end(), row.begin() + 1, row.end());
  }
  if (times.empty()) throw std::runtime_error("load_path_csv: no data rows");
  return PiecewiseLinearPath(std::move(times), std::move(values), dimension);
}

}  // namespace persig
