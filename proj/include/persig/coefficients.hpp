#pragma once

#include <stdexcept>
#include <vector>

namespace persig {

/// Real coefficients a^k_i for output coordinate k (1..n) and homological or
/// simplex dimension i >= 0, with finite support in i.
class CoefficientTable {
public:
  explicit CoefficientTable(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("CoefficientTable: no rows");
    bool any_nonzero = false;
    for (const auto& row : rows_)
      for (double a : row)
        if (a != 0.0) any_nonzero = true;
    if (!any_nonzero) throw std::invalid_argument("CoefficientTable: all coefficients zero");
  }

  int output_dimension() const { return static_cast<int>(rows_.size()); }

  double coeff(int k, int i) const {
    const auto& row = rows_[static_cast<std::size_t>(k)];
    return i < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(i)] : 0.0;
  }

  int max_input_dimension() const {
    int best = -1;
    for (const auto& row : rows_)
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0.0) best = std::max<int>(best, static_cast<int>(i));
    return best;
  }

  /// a^k_i = 1 when i = k-1: coordinate k records the (k-1)-dimensional count.
  static CoefficientTable betti(int n) {
    if (n < 1) throw std::invalid_argument("CoefficientTable::betti: n must be >= 1");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      rows[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(k) + 1, 0.0);
      rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = 1.0;
    }
    return CoefficientTable(std::move(rows));
  }

  /// Single row a^1_i = (-1)^i for i = 0..max_dim.
  static CoefficientTable euler(int max_dim) {
    std::vector<double> row;
    for (int i = 0; i <= std::max(max_dim, 0); ++i) row.push_back(i % 2 == 0 ? 1.0 : -1.0);
    return CoefficientTable({row});
  }

private:
  std::vector<std::vector<double>> rows_;
};

}  // namespace persig
