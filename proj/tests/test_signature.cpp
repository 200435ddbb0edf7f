#include <cmath>

#include <gtest/gtest.h>

#include "persig/path.hpp"
#include "persig/signature.hpp"
#include "oracles.hpp"

using namespace persig;

namespace {

PiecewiseLinearPath line_to(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  values.insert(values.end(), v.begin(), v.end());
  return PiecewiseLinearPath({0.0, 1.0}, std::move(values), n);
}

}  // namespace

TEST(SegmentSignature, ZeroIncrementIsIdentity) {
  const std::vector<double> zero{0.0, 0.0};
  const TruncatedTensor s = segment_signature(zero, 3);
  EXPECT_DOUBLE_EQ(s.coefficients(0)[0], 1.0);
  for (int m = 1; m <= 3; ++m)
    for (double c : s.coefficients(m)) EXPECT_DOUBLE_EQ(c, 0.0);
}

TEST(SegmentSignature, OneDimensionalMoments) {
  const double a = 1.7;
  const std::vector<double> delta{a};
  const TruncatedTensor s = segment_signature(delta, 4);
  EXPECT_DOUBLE_EQ(s.coefficients(1)[0], a);
  EXPECT_DOUBLE_EQ(s.coefficients(2)[0], a * a / 2.0);
  EXPECT_DOUBLE_EQ(s.coefficients(3)[0], a * a * a / 6.0);
  EXPECT_DOUBLE_EQ(s.coefficients(4)[0], a * a * a * a / 24.0);
}

TEST(SegmentSignature, TensorSquareOfBasisVector) {
  const std::vector<double> e1{1.0, 0.0};
  const TruncatedTensor s = segment_signature(e1, 2);
  const auto& level2 = s.coefficients(2);
  EXPECT_DOUBLE_EQ(level2[word_index({1, 1}, 2)], 0.5);
  for (std::size_t i = 1; i < level2.size(); ++i) EXPECT_DOUBLE_EQ(level2[i], 0.0);
}

TEST(ChenProduct, IdentityIsNeutral) {
  Rng rng(41);
  const auto x = oracles::random_path(rng, 2, 4);
  const TruncatedTensor s = signature(x, 3);
  const TruncatedTensor id = TruncatedTensor::identity(2, 3);
  EXPECT_DOUBLE_EQ(oracles::tensor_max_rel_error(chen_product(s, id), s), 0.0);
  EXPECT_DOUBLE_EQ(oracles::tensor_max_rel_error(chen_product(id, s), s), 0.0);
}

TEST(ChenProduct, TwoSegmentCorner) {
  const std::vector<double> e1{1.0, 0.0};
  const std::vector<double> e2{0.0, 1.0};
  const TruncatedTensor prod = chen_product(segment_signature(e1, 2), segment_signature(e2, 2));
  const auto& level2 = prod.coefficients(2);
  EXPECT_DOUBLE_EQ(level2[word_index({1, 1}, 2)], 0.5);
  EXPECT_DOUBLE_EQ(level2[word_index({1, 2}, 2)], 1.0);
  EXPECT_DOUBLE_EQ(level2[word_index({2, 1}, 2)], 0.0);
  EXPECT_DOUBLE_EQ(level2[word_index({2, 2}, 2)], 0.5);
}

TEST(ChenProduct, LineHasGroupInverse) {
  const std::vector<double> delta{0.4, -0.9, 0.3};
  const std::vector<double> minus{-0.4, 0.9, -0.3};
  const TruncatedTensor prod =
      chen_product(segment_signature(delta, 4), segment_signature(minus, 4));
  const TruncatedTensor id = TruncatedTensor::identity(3, 4);
  EXPECT_LT(oracles::tensor_max_rel_error(prod, id), 1e-14);
}

TEST(ChenProduct, RejectsMismatch) {
  const std::vector<double> d2{1.0, 0.0};
  const std::vector<double> d3{1.0, 0.0, 0.0};
  EXPECT_THROW(chen_product(segment_signature(d2, 2), segment_signature(d3, 2)),
               std::invalid_argument);
  EXPECT_THROW(chen_product(segment_signature(d2, 2), segment_signature(d2, 3)),
               std::invalid_argument);
}

TEST(Signature, StraightLineEqualsSegmentSignature) {
  const std::vector<double> v{0.3, -1.1, 0.7};
  EXPECT_DOUBLE_EQ(oracles::tensor_max_rel_error(signature(line_to(v), 5), segment_signature(v, 5)), 0.0);
}

TEST(Signature, ChenIdentityOnRandomPaths) {
  Rng rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(2));
    const auto x = oracles::random_path(rng, n, 4);
    const auto y = oracles::random_path(rng, n, 4);
    const TruncatedTensor glued = signature(concatenate(x, y), 4);
    const TruncatedTensor multiplied = chen_product(signature(x, 4), signature(y, 4));
    EXPECT_LT(oracles::tensor_max_rel_error(glued, multiplied), 1e-10);
  }
}

TEST(Signature, InvariantUnderReparametrization) {
  Rng rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = oracles::random_path(rng, 3, 5);
    const auto warped = oracles::reparametrize(x, rng);
    EXPECT_LT(oracles::tensor_max_rel_error(signature(x, 4), signature(warped, 4)), 1e-9);
  }
}

TEST(Signature, PathTimesReverseIsTreeLike) {
  Rng rng(44);
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = oracles::random_path(rng, 2, 5);
    const TruncatedTensor s = signature(concatenate(x, time_reverse(x)), 4);
    EXPECT_LT(oracles::tensor_max_rel_error(s, TruncatedTensor::identity(2, 4)), 1e-9);
  }
}

TEST(Signature, HomogeneousUnderScaling) {
  Rng rng(45);
  for (int trial = 0; trial < 15; ++trial) {
    const auto x = oracles::random_path(rng, 2, 4);
    const double lambda = rng.uniform(0.3, 2.0);
    std::vector<double> scaled_values;
    for (std::size_t i = 0; i < x.knot_count(); ++i)
      for (double v : x.knot_value(i)) scaled_values.push_back(lambda * v);
    const PiecewiseLinearPath scaled(x.times(), scaled_values, x.dimension());
    const TruncatedTensor sx = signature(x, 4);
    const TruncatedTensor ss = signature(scaled, 4);
    double factor = 1.0;
    for (int m = 1; m <= 4; ++m) {
      factor *= lambda;
      const auto& a = sx.coefficients(m);
      const auto& b = ss.coefficients(m);
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], factor * a[i], 1e-10);
    }
  }
}

TEST(Signature, ConstantPathIsIdentity) {
  const auto constant = PiecewiseLinearPath::constant(0.0, 1.0, {2.0, -1.0});
  EXPECT_DOUBLE_EQ(oracles::tensor_max_rel_error(signature(constant, 3), TruncatedTensor::identity(2, 3)), 0.0);
  // Stationary interior knots are skipped.
  const PiecewiseLinearPath stalled({0.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, 2.0}, 1);
  const std::vector<double> two{2.0};
  EXPECT_LT(oracles::tensor_max_rel_error(signature(stalled, 3), segment_signature(two, 3)), 1e-14);
}

TEST(Signature, BudgetGuard) {
  Rng rng(46);
  const auto x = oracles::random_path(rng, 6, 3);
  EXPECT_THROW(signature(x, 9, 1000), std::runtime_error);
  EXPECT_THROW(signature(x, -1), std::invalid_argument);
}

TEST(Signature, MatchesQuadratureOracle) {
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = oracles::random_path(rng, 2, 4);
    const TruncatedTensor s = signature(x, 3);
    for (const Word& word : std::vector<Word>{{1}, {2}, {1, 2}, {2, 1}, {1, 1}, {1, 2, 1}, {2, 2, 2}}) {
      const double direct = oracles::signature_quadrature(x, word, 4001);
      const double coeff = s.coefficients(static_cast<int>(word.size()))[word_index(word, 2)];
      EXPECT_NEAR(coeff, direct, 1e-4) << "word size " << word.size();
    }
  }
}

TEST(Shuffle, BasicProducts) {
  const WordSum ab = shuffle_product({1}, {2});
  EXPECT_EQ(ab.size(), 2u);
  EXPECT_DOUBLE_EQ(ab.at({1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(ab.at({2, 1}), 1.0);
  const WordSum aa = shuffle_product({1}, {1});
  EXPECT_DOUBLE_EQ(aa.at({1, 1}), 2.0);
}

TEST(Shuffle, TotalMultiplicityIsBinomial) {
  Rng rng(48);
  for (int trial = 0; trial < 10; ++trial) {
    Word u, v;
    const int lu = 1 + static_cast<int>(rng.uniform_index(3));
    const int lv = 1 + static_cast<int>(rng.uniform_index(3));
    for (int i = 0; i < lu; ++i) u.push_back(1 + static_cast<int>(rng.uniform_index(2)));
    for (int i = 0; i < lv; ++i) v.push_back(1 + static_cast<int>(rng.uniform_index(2)));
    double total = 0.0;
    for (const auto& [word, mult] : shuffle_product(u, v)) {
      EXPECT_EQ(word.size(), static_cast<std::size_t>(lu + lv));
      total += mult;
    }
    double binom = 1.0;
    for (int i = 1; i <= lu; ++i) binom = binom * (lv + i) / i;
    EXPECT_DOUBLE_EQ(total, binom);
  }
}

TEST(Functional, EmptyWordReadsLevelZero) {
  Rng rng(49);
  const auto x = oracles::random_path(rng, 2, 4);
  const TruncatedTensor s = signature(x, 3);
  EXPECT_DOUBLE_EQ(eval_functional({{Word{}, 1.0}}, s), 1.0);
}

TEST(Functional, SingleLetterReadsDisplacement) {
  const auto x = line_to({0.7, -0.2});
  const TruncatedTensor s = signature(x, 2);
  EXPECT_DOUBLE_EQ(eval_functional({{Word{1}, 1.0}}, s), 0.7);
  EXPECT_DOUBLE_EQ(eval_functional({{Word{2}, 1.0}}, s), -0.2);
  EXPECT_THROW(eval_functional({{Word{1, 1, 1}, 1.0}}, s), std::invalid_argument);
}

TEST(Functional, ShuffleIdentityOnRandomPaths) {
  Rng rng(50);
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = oracles::random_path(rng, 2, 4);
    const TruncatedTensor s = signature(x, 4);
    for (const auto& [u, v] : std::vector<std::pair<Word, Word>>{
             {{1}, {2}}, {{1}, {1}}, {{1, 2}, {1}}, {{2}, {2, 1}}, {{1, 1}, {2, 2}}}) {
      const double lhs = eval_functional({{u, 1.0}}, s) * eval_functional({{v, 1.0}}, s);
      const double rhs = eval_functional(shuffle_product(u, v), s);
      EXPECT_NEAR(lhs, rhs, 1e-9);
    }
  }
}

TEST(InnerProduct, LineAgainstItself) {
  const auto e1 = line_to({1.0, 0.0});
  const TruncatedTensor s = signature(e1, 2);
  EXPECT_DOUBLE_EQ(tensor_inner_product(s, s), 1.0 + 1.0 + 0.25);
  const TruncatedTensor id2 = TruncatedTensor::identity(2, 2);
  EXPECT_DOUBLE_EQ(tensor_inner_product(id2, id2), 1.0);
}

TEST(InnerProduct, OrthogonalLinesOverlapOnlyAtLevelZero) {
  const TruncatedTensor s1 = signature(line_to({1.0, 0.0}), 2);
  const TruncatedTensor s2 = signature(line_to({0.0, 1.0}), 2);
  EXPECT_DOUBLE_EQ(tensor_inner_product(s1, s2), 1.0);
  EXPECT_THROW(tensor_inner_product(s1, TruncatedTensor::identity(3, 2)),
               std::invalid_argument);
}

TEST(Flatten, LabelsMatchLayout) {
  const auto labels = word_labels(2, 2);
  const std::vector<std::string> expected{"e", "1", "2", "1.1", "1.2", "2.1", "2.2"};
  EXPECT_EQ(labels, expected);
  const TruncatedTensor s = signature(line_to({1.0, 0.0}), 2);
  const auto flat = flatten(s);
  ASSERT_EQ(flat.size(), labels.size());
  EXPECT_DOUBLE_EQ(flat[0], 1.0);
  EXPECT_DOUBLE_EQ(flat[1], 1.0);
  EXPECT_DOUBLE_EQ(flat[3], 0.5);
  EXPECT_EQ(flatten(s, true).size(), labels.size() - 1);
}
