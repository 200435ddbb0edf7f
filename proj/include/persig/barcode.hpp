#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/common.hpp"

namespace persig {

/// Half-open interval [birth, death). Death is always finite inside a
/// Barcode; unbounded classes are clamped to the horizon at ingestion.
struct Interval {
  double birth = 0.0;
  double death = 0.0;

  double length() const { return death - birth; }
  bool contains(double t) const { return birth <= t && t < death; }
  bool contains(double s, double t) const { return birth <= s && t < death; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// What to do with intervals whose death is unbounded.
enum class EssentialPolicy { Clamp, Drop };

/// Multiset of intervals per homological dimension, tame by construction:
/// finitely many intervals, all contained in [0, horizon].
class Barcode {
public:
  /// Auto-horizon mode: the horizon grows to the largest finite death added.
  Barcode() = default;

  /// Fixed-horizon mode: adding an interval beyond `horizon` is an error.
  explicit Barcode(double horizon) : horizon_(horizon), fixed_horizon_(true) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("Barcode: horizon must be >= 0");
  }

  double horizon() const { return horizon_; }

  void set_horizon(double horizon) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("Barcode: horizon must be >= 0");
    for (const auto& [dim, ivs] : per_dim_)
      for (const Interval& iv : ivs)
        if (iv.death > horizon)
          throw std::invalid_argument("Barcode: horizon below existing interval death");
    horizon_ = horizon;
    fixed_horizon_ = true;
  }

  void add(int dim, Interval iv) {
    if (dim < 0) throw std::invalid_argument("Barcode: negative dimension");
    if (!std::isfinite(iv.birth) || !std::isfinite(iv.death))
      throw std::invalid_argument("Barcode: non-finite interval endpoint");
    if (iv.birth < 0.0) throw std::invalid_argument("Barcode: negative birth");
    if (!(iv.birth < iv.death))
      throw std::invalid_argument("Barcode: birth must be strictly below death");
    if (fixed_horizon_ && iv.death > horizon_)
      throw std::invalid_argument("Barcode: interval death exceeds horizon");
    horizon_ = std::max(horizon_, iv.death);
    auto& ivs = per_dim_[dim];
    ivs.insert(std::upper_bound(ivs.begin(), ivs.end(), iv), iv);
  }

  /// Ingest a class with unbounded death. Requires a fixed horizon; the
  /// clamped interval [birth, horizon) is dropped when empty.
  void add_essential(int dim, double birth, EssentialPolicy policy = EssentialPolicy::Clamp) {
    if (!fixed_horizon_)
      throw std::invalid_argument("Barcode: essential interval needs a horizon");
    if (policy == EssentialPolicy::Drop) return;
    if (birth < 0.0) throw std::invalid_argument("Barcode: negative birth");
    if (birth < horizon_) add(dim, Interval{birth, horizon_});
  }

  const std::vector<Interval>& intervals(int dim) const {
    static const std::vector<Interval> empty;
    auto it = per_dim_.find(dim);
    return it == per_dim_.end() ? empty : it->second;
  }

  std::vector<int> dimensions() const {
    std::vector<int> dims;
    for (const auto& [dim, ivs] : per_dim_)
      if (!ivs.empty()) dims.push_back(dim);
    return dims;
  }

  int max_dimension() const {
    int best = -1;
    for (const auto& [dim, ivs] : per_dim_)
      if (!ivs.empty()) best = std::max(best, dim);
    return best;
  }

  std::size_t size() const {
    std::size_t total = 0;
    for (const auto& [dim, ivs] : per_dim_) total += ivs.size();
    return total;
  }

  bool empty() const { return size() == 0; }

  /// Multiset equality per dimension plus matching horizon.
  friend bool operator==(const Barcode& a, const Barcode& b) {
    if (a.horizon_ != b.horizon_) return false;
    auto nonempty = [](const std::map<int, std::vector<Interval>>& m) {
      std::map<int, std::vector<Interval>> out;
      for (const auto& [dim, ivs] : m)
        if (!ivs.empty()) out.emplace(dim, ivs);
      return out;
    };
    return nonempty(a.per_dim_) == nonempty(b.per_dim_);
  }

private:
  std::map<int, std::vector<Interval>> per_dim_;  // sorted by (birth, death)
  double horizon_ = 0.0;
  bool fixed_horizon_ = false;
};

/// Number of dim-intervals containing t (half-open convention).
inline int betti_count(const Barcode& b, int dim, double t) {
  if (t < 0.0) throw std::invalid_argument("betti_count: t must be >= 0");
  int count = 0;
  for (const Interval& iv : b.intervals(dim))
    if (iv.contains(t)) ++count;
  return count;
}

/// Number of dim-intervals containing [s, t].
inline int rank_count(const Barcode& b, int dim, double s, double t) {
  if (s > t) throw std::invalid_argument("rank_count: requires s <= t");
  int count = 0;
  for (const Interval& iv : b.intervals(dim))
    if (iv.contains(s, t)) ++count;
  return count;
}

namespace detail {

inline bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0';
}

}  // namespace detail

/// Text format, one interval per line: `<dim> <birth> <death|inf>`.
/// Lines starting with `#` are comments; `# horizon <v>` records the horizon.
/// Horizon priority: explicit argument, then file header, then the largest
/// finite endpoint (including essential births) in the file.
inline Barcode load_barcode(std::istream& in, std::optional<double> horizon = std::nullopt,
                            EssentialPolicy policy = EssentialPolicy::Clamp) {
  struct Row {
    int dim;
    double birth;
    double death;  // +inf for essential
  };
  std::vector<Row> rows;
  std::optional<double> header_horizon;
  double max_endpoint = 0.0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    const auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    trimmed = trimmed.substr(first);
    if (trimmed[0] == '#') {
      std::istringstream hs(trimmed.substr(1));
      std::string key;
      double value = 0.0;
      if (hs >> key >> value && key == "horizon") header_horizon = value;
      continue;
    }
    std::istringstream ls(trimmed);
    std::string dim_tok, birth_tok, death_tok, extra;
    if (!(ls >> dim_tok >> birth_tok >> death_tok) || (ls >> extra))
      throw std::runtime_error("load_barcode: malformed line " + std::to_string(line_no));
    Row row{};
    double dim_value = 0.0;
    if (!detail::parse_double(dim_tok, dim_value) || dim_value < 0.0 ||
        dim_value != std::floor(dim_value))
      throw std::runtime_error("load_barcode: bad dimension on line " + std::to_string(line_no));
    row.dim = static_cast<int>(dim_value);
    if (!detail::parse_double(birth_tok, row.birth))
      throw std::runtime_error("load_barcode: bad birth on line " + std::to_string(line_no));
    if (row.birth < 0.0)
      throw std::runtime_error("load_barcode: negative birth on line " + std::to_string(line_no));
    if (death_tok == "inf") {
      row.death = std::numeric_limits<double>::infinity();
      max_endpoint = std::max(max_endpoint, row.birth);
    } else {
      if (!detail::parse_double(death_tok, row.death))
        throw std::runtime_error("load_barcode: bad death on line " + std::to_string(line_no));
      if (!(row.birth < row.death))
        throw std::runtime_error("load_barcode: birth >= death on line " + std::to_string(line_no));
      max_endpoint = std::max(max_endpoint, row.death);
    }
    rows.push_back(row);
  }
  const double T = horizon.value_or(header_horizon.value_or(max_endpoint));
  Barcode barcode(T);
  for (const Row& row : rows) {
    if (std::isinf(row.death))
      barcode.add_essential(row.dim, row.birth, policy);
    else
      barcode.add(row.dim, Interval{row.birth, row.death});
  }
  return barcode;
}

inline void save_barcode(const Barcode& b, std::ostream& out) {
  out << "# persig barcode v1\n";
  out << "# horizon " << format_double(b.horizon()) << "\n";
  for (int dim : b.dimensions())
    for (const Interval& iv : b.intervals(dim))
      out << dim << ' ' << format_double(iv.birth) << ' ' << format_double(iv.death) << '\n';
  if (!out) throw std::runtime_error("save_barcode: write failure");
}

}  // namespace persig
