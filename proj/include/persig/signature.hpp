#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "persig/path.hpp"

namespace persig {

/// Number of coefficients in levels 1..M over an n-dimensional space;
/// saturates at SIZE_MAX instead of overflowing.
inline std::size_t tensor_coefficient_count(int n, int M) {
  constexpr std::size_t kMax = static_cast<std::size_t>(-1);
  std::size_t total = 0;
  std::size_t level = 1;
  for (int m = 1; m <= M; ++m) {
    if (level > kMax / static_cast<std::size_t>(n)) return kMax;
    level *= static_cast<std::size_t>(n);
    if (total > kMax - level) return kMax;
    total += level;
  }
  return total;
}

/// Levels 0..M of the tensor algebra over an n-dimensional space, dense
/// storage: level m holds n^m coefficients in word-lexicographic order.
class TruncatedTensor {
public:
  TruncatedTensor(int dimension, int level)
      : dimension_(dimension), level_(level) {
    if (dimension_ < 1) throw std::invalid_argument("TruncatedTensor: dimension must be >= 1");
    if (level_ < 0) throw std::invalid_argument("TruncatedTensor: level must be >= 0");
    levels_.resize(static_cast<std::size_t>(level_) + 1);
    std::size_t size = 1;
    for (int m = 0; m <= level_; ++m) {
      levels_[static_cast<std::size_t>(m)].assign(size, 0.0);
      if (m < level_) size *= static_cast<std::size_t>(dimension_);
    }
    levels_[0][0] = 1.0;
  }

  static TruncatedTensor identity(int dimension, int level) {
    return TruncatedTensor(dimension, level);
  }

  int dimension() const { return dimension_; }
  int level() const { return level_; }

  std::vector<double>& coefficients(int m) { return levels_[static_cast<std::size_t>(m)]; }
  const std::vector<double>& coefficients(int m) const {
    return levels_[static_cast<std::size_t>(m)];
  }

private:
  int dimension_;
  int level_;
  std::vector<std::vector<double>> levels_;
};

/// Multi-index (i_1, ..., i_m) with letters in 1..n.
using Word = std::vector<int>;

/// Formal linear combination of words.
using WordSum = std::map<Word, double>;

/// Flat index of a word inside its level's coefficient array.
inline std::size_t word_index(const Word& word, int dimension) {
  std::size_t idx = 0;
  for (int letter : word) {
    if (letter < 1 || letter > dimension)
      throw std::invalid_argument("word_index: letter out of range");
    idx = idx * static_cast<std::size_t>(dimension) + static_cast<std::size_t>(letter - 1);
  }
  return idx;
}

/// Signature of the straight segment with increment delta: level m is
/// delta^(tensor m) / m!.
inline TruncatedTensor segment_signature(std::span<const double> delta, int M) {
  const int n = static_cast<int>(delta.size());
  TruncatedTensor out(n, M);
  for (int m = 1; m <= M; ++m) {
    const auto& prev = out.coefficients(m - 1);
    auto& cur = out.coefficients(m);
    std::size_t pos = 0;
    for (double p : prev)
      for (int j = 0; j < n; ++j) cur[pos++] = p * delta[static_cast<std::size_t>(j)] / m;
  }
  return out;
}

/// Truncated tensor-algebra product: level m of the result is
/// sum over a+b=m of s_a (x) t_b.
inline TruncatedTensor chen_product(const TruncatedTensor& s, const TruncatedTensor& t) {
  if (s.dimension() != t.dimension() || s.level() != t.level())
    throw std::invalid_argument("chen_product: dimension or level mismatch");
  const int n = s.dimension();
  const int M = s.level();
  TruncatedTensor out(n, M);
  out.coefficients(0)[0] = s.coefficients(0)[0] * t.coefficients(0)[0];
  for (int m = 1; m <= M; ++m) {
    auto& target = out.coefficients(m);
    std::fill(target.begin(), target.end(), 0.0);
    std::size_t left_size = 1;
    for (int a = 0; a <= m; ++a) {
      const auto& left = s.coefficients(a);
      const auto& right = t.coefficients(m - a);
      const std::size_t right_size = right.size();
      for (std::size_t i = 0; i < left_size; ++i) {
        const double li = left[i];
        if (li == 0.0) continue;
        double* slot = target.data() + i * right_size;
        for (std::size_t j = 0; j < right_size; ++j) slot[j] += li * right[j];
      }
      left_size *= static_cast<std::size_t>(n);
    }
  }
  return out;
}

/// Truncated signature of a piecewise linear path: Chen product of segment
/// signatures, with stationary segments skipped. Guards against the n^M
/// coefficient blow-up via `budget`.
inline TruncatedTensor signature(const PiecewiseLinearPath& x, int M,
                                 std::size_t budget = 10'000'000) {
  if (M < 0) throw std::invalid_argument("signature: M must be >= 0");
  const int n = x.dimension();
  if (tensor_coefficient_count(n, M) > budget)
    throw std::runtime_error(
        "signature: tensor budget exceeded (" + std::to_string(n) + "^1..^" + std::to_string(M) +
        " coefficients); use the signature kernel for high-dimensional paths");
  TruncatedTensor result = TruncatedTensor::identity(n, M);
  std::vector<double> delta(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i + 1 < x.knot_count(); ++i) {
    const auto a = x.knot_value(i);
    const auto b = x.knot_value(i + 1);
    bool moved = false;
    for (int k = 0; k < n; ++k) {
      delta[static_cast<std::size_t>(k)] = b[k] - a[k];
      if (delta[static_cast<std::size_t>(k)] != 0.0) moved = true;
    }
    if (!moved) continue;
    result = chen_product(result, segment_signature(delta, M));
  }
  return result;
}

/// All order-preserving interleavings of u and v with multiplicities.
inline WordSum shuffle_product(const Word& u, const Word& v) {
  if (u.empty()) return {{v, 1.0}};
  if (v.empty()) return {{u, 1.0}};
  WordSum out;
  const Word u_rest(u.begin() + 1, u.end());
  for (const auto& [word, mult] : shuffle_product(u_rest, v)) {
    Word prefixed;
    prefixed.reserve(word.size() + 1);
    prefixed.push_back(u.front());
    prefixed.insert(prefixed.end(), word.begin(), word.end());
    out[prefixed] += mult;
  }
  const Word v_rest(v.begin() + 1, v.end());
  for (const auto& [word, mult] : shuffle_product(u, v_rest)) {
    Word prefixed;
    prefixed.reserve(word.size() + 1);
    prefixed.push_back(v.front());
    prefixed.insert(prefixed.end(), word.begin(), word.end());
    out[prefixed] += mult;
  }
  return out;
}

/// <tensor, functional>: multiplicities times matching coefficients.
inline double eval_functional(const WordSum& functional, const TruncatedTensor& s) {
  double acc = 0.0;
  for (const auto& [word, mult] : functional) {
    const int m = static_cast<int>(word.size());
    if (m > s.level())
      throw std::invalid_argument("eval_functional: word longer than truncation level");
    acc += mult * s.coefficients(m)[word_index(word, s.dimension())];
  }
  return acc;
}

/// Level-wise Euclidean inner product, summed over levels 0..M.
inline double tensor_inner_product(const TruncatedTensor& s, const TruncatedTensor& t) {
  if (s.dimension() != t.dimension() || s.level() != t.level())
    throw std::invalid_argument("tensor_inner_product: dimension or level mismatch");
  double acc = 0.0;
  for (int m = 0; m <= s.level(); ++m) {
    const auto& a = s.coefficients(m);
    const auto& b = t.coefficients(m);
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  }
  return acc;
}

/// Coefficients flattened levels-ascending, word-lexicographic within level.
inline std::vector<double> flatten(const TruncatedTensor& s, bool drop_level0 = false) {
  std::vector<double> out;
  for (int m = drop_level0 ? 1 : 0; m <= s.level(); ++m) {
    const auto& level = s.coefficients(m);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Column labels matching `flatten`: the empty word is "e", longer words are
/// dot-separated letters ("1.2.2").
inline std::vector<std::string> word_labels(int n, int M, bool drop_level0 = false) {
  std::vector<std::string> out;
  if (!drop_level0) out.push_back("e");
  std::vector<std::string> current{""};
  for (int m = 1; m <= M; ++m) {
    std::vector<std::string> next;
    next.reserve(current.size() * static_cast<std::size_t>(n));
    for (const std::string& prefix : current)
      for (int letter = 1; letter <= n; ++letter)
        next.push_back(prefix.empty() ? std::to_string(letter)
                                      : prefix + "." + std::to_string(letter));
    out.insert(out.end(), next.begin(), next.end());
    current = std::move(next);
  }
  return out;
}

}  // namespace persig
