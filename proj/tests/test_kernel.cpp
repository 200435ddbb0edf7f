#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "persig/embeddings.hpp"
#include "persig/kernel.hpp"
#include "persig/signature.hpp"
#include "oracles.hpp"

using namespace persig;

namespace {

PiecewiseLinearPath unit_line(int n) {
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) values.push_back(i == 0 ? 1.0 : 0.0);
  return PiecewiseLinearPath({0.0, 1.0}, std::move(values), n);
}

double min_eigenvalue(const GramMatrix& g) {
  Eigen::MatrixXd m(g.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

TEST(SigKernel, LineAgainstItselfMatchesTensorOracle) {
  const auto x = unit_line(2);
  EXPECT_NEAR(sig_kernel(x, x, 2, StaticKernel::linear()), 2.25, 1e-12);
}

TEST(SigKernel, ConstantPathGivesOne) {
  const auto constant = PiecewiseLinearPath::constant(0.0, 1.0, {3.0, 4.0});
  Rng rng(61);
  const auto y = oracles::random_path(rng, 2, 6);
  EXPECT_DOUBLE_EQ(sig_kernel(constant, y, 3, StaticKernel::linear()), 1.0);
  EXPECT_DOUBLE_EQ(sig_kernel(constant, y, 3, StaticKernel::rbf(0.7)), 1.0);
}

TEST(SigKernel, MatchesBruteForceOracleOnRandomPairs) {
  Rng rng(62);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(4));
    const int M = 1 + static_cast<int>(rng.uniform_index(4));
    const auto x = oracles::random_path(rng, n, 9);
    const auto y = oracles::random_path(rng, n, 9);
    const double dp = sig_kernel(x, y, M, StaticKernel::linear());
    const double oracle = tensor_inner_product(signature(x, M), signature(y, M));
    const double scale = std::max({std::abs(dp), std::abs(oracle), 1.0});
    EXPECT_LT(std::abs(dp - oracle) / scale, 1e-8) << "n=" << n << " M=" << M;
  }
}

TEST(SigKernel, StationaryKnotsAreSkipped) {
  const PiecewiseLinearPath stalled({0.0, 0.5, 1.0}, {0.0, 0.0, 1.0}, 1);
  const auto moving = unit_line(1);
  EXPECT_DOUBLE_EQ(sig_kernel(stalled, moving, 3, StaticKernel::linear()),
                   sig_kernel(moving, moving, 3, StaticKernel::linear()));
}

TEST(SigKernel, InvariantUnderReparametrization) {
  Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracles::random_path(rng, 2, 5);
    const auto y = oracles::random_path(rng, 2, 5);
    // Insert a collinear midpoint into x: same curve, different knots.
    std::vector<double> times, values;
    for (std::size_t i = 0; i + 1 < x.knot_count(); ++i) {
      times.push_back(x.times()[i]);
      for (double v : x.knot_value(i)) values.push_back(v);
      const double mid = 0.5 * (x.times()[i] + x.times()[i + 1]);
      times.push_back(mid);
      for (double v : x.evaluate(mid)) values.push_back(v);
    }
    times.push_back(x.end_time());
    for (double v : x.knot_value(x.knot_count() - 1)) values.push_back(v);
    const PiecewiseLinearPath refined(times, values, 2);
    for (const StaticKernel& kappa : {StaticKernel::linear(), StaticKernel::rbf(0.9)}) {
      const double a = sig_kernel(x, y, 3, kappa);
      const double b = sig_kernel(refined, y, 3, kappa);
      EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(SigKernel, SymmetricInArguments) {
  Rng rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracles::random_path(rng, 3, 6);
    const auto y = oracles::random_path(rng, 3, 6);
    for (const StaticKernel& kappa : {StaticKernel::linear(), StaticKernel::rbf(1.3)}) {
      EXPECT_NEAR(sig_kernel(x, y, 3, kappa), sig_kernel(y, x, 3, kappa), 1e-12);
    }
  }
}

TEST(SigKernel, TruncationPartialSumsNondecreasingOnDiagonal) {
  Rng rng(65);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracles::random_path(rng, 2, 6);
    double previous = 0.0;
    for (int M = 0; M <= 5; ++M) {
      const double k = sig_kernel(x, x, M, StaticKernel::linear());
      EXPECT_GE(k, previous - 1e-12);
      previous = k;
    }
  }
}

TEST(SigKernel, RejectsDimensionMismatch) {
  EXPECT_THROW(sig_kernel(unit_line(2), unit_line(3), 2, StaticKernel::linear()),
               std::invalid_argument);
  EXPECT_THROW(StaticKernel::rbf(0.0), std::invalid_argument);
}

TEST(Gram, SinglePathMatrix) {
  const std::vector<PiecewiseLinearPath> paths{unit_line(2)};
  const GramMatrix g = gram(paths, 2, StaticKernel::linear());
  ASSERT_EQ(g.size(), 1u);
  EXPECT_NEAR(g(0, 0), 2.25, 1e-12);
}

TEST(Gram, PermutationPermutesEntries) {
  Rng rng(66);
  std::vector<PiecewiseLinearPath> paths;
  for (int i = 0; i < 5; ++i) paths.push_back(oracles::random_path(rng, 2, 5));
  const GramMatrix g = gram(paths, 3, StaticKernel::linear());
  std::vector<PiecewiseLinearPath> reversed(paths.rbegin(), paths.rend());
  const GramMatrix h = gram(reversed, 3, StaticKernel::linear());
  const std::size_t n = paths.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      EXPECT_DOUBLE_EQ(g(i, j), h(n - 1 - i, n - 1 - j));
  EXPECT_THROW(gram({}, 2, StaticKernel::linear()), std::invalid_argument);
}

TEST(Gram, SymmetricAndPositiveSemidefinite) {
  Rng rng(67);
  std::vector<PiecewiseLinearPath> paths;
  for (int i = 0; i < 25; ++i) paths.push_back(oracles::random_path(rng, 2, 8));
  for (const StaticKernel& kappa : {StaticKernel::linear(), StaticKernel::rbf(1.0)}) {
    const GramMatrix g = gram(paths, 3, kappa);
    EXPECT_LE(g.asymmetry(), 1e-12);
    EXPECT_GE(min_eigenvalue(g), -1e-8 * g.trace());
  }
}

TEST(Pipeline, RawEmbeddingWhenParametersAreTrivial) {
  Barcode b(2.0);
  b.add(0, {0.0, 2.0});
  EmbeddingSpec spec;
  spec.kind = EmbeddingKind::Envelope;
  PipelineParams params;
  params.time_aug = false;
  EXPECT_EQ(kernelized_feature_pipeline(b, spec, params), envelope_embed(b, 0));
}

TEST(Pipeline, TimeAugmentationMakesConstantEmbedMove) {
  Barcode empty(1.0);
  EmbeddingSpec spec;
  spec.kind = EmbeddingKind::Euler;
  PipelineParams params;
  params.time_aug = true;
  const auto path = kernelized_feature_pipeline(empty, spec, params);
  EXPECT_EQ(path.dimension(), 2);
  EXPECT_GT(one_variation(path, VectorNorm::L2), 0.0);
}

TEST(Pipeline, FullStackDimensions) {
  Barcode b(2.0);
  b.add(0, {0.0, 2.0});
  EmbeddingSpec spec;
  spec.kind = EmbeddingKind::Envelope;
  PipelineParams params;
  params.time_aug = true;
  const auto augmented = kernelized_feature_pipeline(b, spec, params);
  EXPECT_EQ(augmented.dimension(), 3);  // 2-knot envelope -> 3-dim after tau
  params.lags = {0.5};
  EXPECT_EQ(kernelized_feature_pipeline(b, spec, params).dimension(), 6);
  params.envelope_N = 1;
  params.lags.clear();
  params.time_aug = false;
  EXPECT_EQ(kernelized_feature_pipeline(b, spec, params),
            restricted_envelope_embed(b, 0, 1));
}

TEST(MedianHeuristic, PositiveAndSane) {
  Rng rng(68);
  std::vector<PiecewiseLinearPath> paths;
  for (int i = 0; i < 4; ++i) paths.push_back(oracles::random_path(rng, 2, 5));
  const double sigma = median_pairwise_distance(paths);
  EXPECT_GT(sigma, 0.0);
  EXPECT_LT(sigma, 10.0);
}
