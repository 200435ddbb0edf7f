#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "persig/rips.hpp"
#include "oracles.hpp"

using namespace persig;

namespace {

DistanceMatrix two_points(double d) { return DistanceMatrix({0.0, d, d, 0.0}, 2); }

DistanceMatrix equilateral(double d) {
  return DistanceMatrix({0.0, d, d, d, 0.0, d, d, d, 0.0}, 3);
}

DistanceMatrix unit_square() {
  const std::vector<std::vector<double>> corners{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return DistanceMatrix::from_points(corners);
}

int count_dim(const FilteredComplex& k, int dim) {
  int count = 0;
  for (const Simplex& s : k.simplices())
    if (s.dim() == dim) ++count;
  return count;
}

}  // namespace

TEST(DistanceMatrixTest, ValidatesShape) {
  EXPECT_THROW(DistanceMatrix({}, 0), std::invalid_argument);
  EXPECT_THROW(DistanceMatrix({0.0, 1.0, 2.0, 0.0}, 2), std::invalid_argument);  // asymmetric
  EXPECT_THROW(DistanceMatrix({1.0}, 1), std::invalid_argument);                 // diagonal
  EXPECT_THROW(DistanceMatrix({0.0, -1.0, -1.0, 0.0}, 2), std::invalid_argument);
}

TEST(Rips, TwoPointsGiveOneEdge) {
  const FilteredComplex k = build_rips(two_points(1.0), 0, 2.0);
  EXPECT_EQ(count_dim(k, 0), 2);
  EXPECT_EQ(count_dim(k, 1), 1);
  EXPECT_DOUBLE_EQ(k.simplices().back().filtration, 1.0);
}

TEST(Rips, EquilateralTriangleEntersAtOnce) {
  const FilteredComplex k = build_rips(equilateral(1.0), 1, 2.0);
  EXPECT_EQ(count_dim(k, 0), 3);
  EXPECT_EQ(count_dim(k, 1), 3);
  EXPECT_EQ(count_dim(k, 2), 1);
  for (const Simplex& s : k.simplices())
    if (s.dim() > 0) EXPECT_DOUBLE_EQ(s.filtration, 1.0);
}

TEST(Rips, ScaleCutoffExcludesDiagonals) {
  const FilteredComplex k = build_rips(unit_square(), 1, 1.2);
  EXPECT_EQ(count_dim(k, 1), 4);  // sqrt(2) > 1.2 excludes both diagonals
  for (const Simplex& s : k.simplices())
    if (s.dim() == 1) EXPECT_DOUBLE_EQ(s.filtration, 1.0);
  EXPECT_EQ(count_dim(k, 2), 0);
}

TEST(Rips, RejectsBadParameters) {
  EXPECT_THROW(build_rips(two_points(1.0), -1, 2.0), std::invalid_argument);
  EXPECT_THROW(build_rips(two_points(1.0), 0, 0.0), std::invalid_argument);
}

TEST(Rips, SimplicesSortedAndClosedUnderFaces) {
  Rng rng(12);
  const DistanceMatrix d = oracles::random_cloud_matrix(rng, 7);
  const FilteredComplex k = build_rips(d, 2, 0.8);
  for (std::size_t i = 0; i + 1 < k.simplices().size(); ++i)
    EXPECT_TRUE(detail::simplex_order(k.simplices()[i], k.simplices()[i + 1]));
  for (const Simplex& s : k.simplices()) {
    if (s.dim() == 0) continue;
    for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
      std::vector<int> face(s.vertices);
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
      bool found = false;
      for (const Simplex& other : k.simplices())
        if (other.vertices == face) {
          found = true;
          EXPECT_LE(other.filtration, s.filtration);
        }
      EXPECT_TRUE(found);
    }
  }
}

TEST(Persistence, TwoPointBarcode) {
  const Barcode b = persistence(build_rips(two_points(1.0), 0, 2.0));
  ASSERT_EQ(b.intervals(0).size(), 2u);
  EXPECT_EQ(b.intervals(0)[0], (Interval{0.0, 1.0}));
  EXPECT_EQ(b.intervals(0)[1], (Interval{0.0, 2.0}));
}

TEST(Persistence, EquilateralKillsLoopInstantly) {
  const Barcode b = persistence(build_rips(equilateral(1.0), 1, 2.0));
  ASSERT_EQ(b.intervals(0).size(), 3u);
  EXPECT_EQ(b.intervals(0)[0], (Interval{0.0, 1.0}));
  EXPECT_EQ(b.intervals(0)[1], (Interval{0.0, 1.0}));
  EXPECT_EQ(b.intervals(0)[2], (Interval{0.0, 2.0}));
  EXPECT_TRUE(b.intervals(1).empty());  // loop and triangle enter together
}

TEST(Persistence, SquareHasOneLoop) {
  const Barcode b = persistence(build_rips(unit_square(), 1, 2.0));
  ASSERT_EQ(b.intervals(1).size(), 1u);
  EXPECT_DOUBLE_EQ(b.intervals(1)[0].birth, 1.0);
  EXPECT_DOUBLE_EQ(b.intervals(1)[0].death, std::sqrt(2.0));
}

TEST(Persistence, H0CountAtZeroEqualsPointCount) {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_index(5));
    const DistanceMatrix d = oracles::random_cloud_matrix(rng, m);
    const Barcode b = persistence(build_rips(d, 1, 2.0));
    EXPECT_EQ(betti_count(b, 0, 0.0), m);
  }
}

TEST(Persistence, MatchesUnionFindInDimensionZero) {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_index(7));
    const DistanceMatrix d = oracles::random_cloud_matrix(rng, m);
    const Barcode reduced = persistence(build_rips(d, 1, 0.7));
    const Barcode linked = h0_union_find(d, 0.7);
    ASSERT_EQ(reduced.intervals(0).size(), linked.intervals(0).size());
    for (std::size_t i = 0; i < reduced.intervals(0).size(); ++i)
      EXPECT_EQ(reduced.intervals(0)[i], linked.intervals(0)[i]);
  }
}

TEST(Persistence, DeterministicAcrossReruns) {
  Rng rng(15);
  const DistanceMatrix d = oracles::random_cloud_matrix(rng, 8);
  const Barcode first = persistence(build_rips(d, 2, 1.0));
  const Barcode second = persistence(build_rips(d, 2, 1.0));
  EXPECT_EQ(first, second);
}

TEST(Persistence, AgreesWithBoundaryRankOracle) {
  Rng rng(16);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 4 + static_cast<int>(rng.uniform_index(4));  // 4..7 points
    const DistanceMatrix d = oracles::random_cloud_matrix(rng, m);
    const double scale = 0.9;
    const FilteredComplex k = build_rips(d, 2, scale);
    const Barcode b = persistence(k);
    const oracles::PersistentRankOracle oracle(k);
    std::vector<double> knots = k.distinct_filtration_values();
    for (int dim = 0; dim <= 2; ++dim)
      for (double s : knots)
        for (double t : knots) {
          if (s > t) continue;
          EXPECT_EQ(rank_count(b, dim, s, t), oracle.betti(dim, s, t))
              << "dim=" << dim << " s=" << s << " t=" << t;
        }
  }
}

TEST(EulerCurve, EquilateralCounts) {
  const auto path = euler_curve_counts(build_rips(equilateral(1.0), 1, 2.0));
  EXPECT_DOUBLE_EQ(path.evaluate(0.0)[0], 3.0);          // three vertices
  EXPECT_DOUBLE_EQ(path.evaluate(1.0)[0], 3.0 - 3.0 + 1.0);
}

TEST(EulerCurve, SinglePointIsConstantOne) {
  const DistanceMatrix d({0.0}, 1);
  const auto path = euler_curve_counts(build_rips(d, 0, 1.0));
  EXPECT_EQ(path.knot_count(), 1u);
  EXPECT_DOUBLE_EQ(path.evaluate(0.0)[0], 1.0);
}

TEST(EulerCurve, TwoPointsDropToOne) {
  const auto path = euler_curve_counts(build_rips(two_points(1.0), 0, 2.0));
  EXPECT_DOUBLE_EQ(path.evaluate(0.0)[0], 2.0);
  EXPECT_DOUBLE_EQ(path.evaluate(1.0)[0], 1.0);
}

TEST(EulerCurve, MatchesAlternatingBettiSumOnFullComplexes) {
  Rng rng(18);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3 + static_cast<int>(rng.uniform_index(4));  // 3..6 points
    const DistanceMatrix d = oracles::random_cloud_matrix(rng, m);
    // max_dim = m - 1 builds the full clique complex, so the alternating
    // Betti sum across every dimension is defined.
    const FilteredComplex k = build_rips(d, m - 1, 2.0);
    const Barcode b = persistence(k);
    const auto counts = euler_curve_counts(k);
    for (double t : k.distinct_filtration_values()) {
      double chi = 0.0;
      for (int dim = 0; dim < m; ++dim)
        chi += (dim % 2 == 0 ? 1.0 : -1.0) * betti_count(b, dim, t);
      EXPECT_DOUBLE_EQ(counts.evaluate(t)[0], chi);
    }
  }
}

TEST(SimplexEmbedding, CoefficientRowsSelectCounts) {
  const FilteredComplex k = build_rips(equilateral(1.0), 1, 2.0);
  const auto vertex_count = simplex_embedding(k, CoefficientTable(std::vector<std::vector<double>>{{1.0}}));
  EXPECT_DOUBLE_EQ(vertex_count.evaluate(0.0)[0], 3.0);
  EXPECT_DOUBLE_EQ(vertex_count.evaluate(1.0)[0], 3.0);
  const auto edge_count = simplex_embedding(k, CoefficientTable(std::vector<std::vector<double>>{{0.0, 1.0}}));
  EXPECT_DOUBLE_EQ(edge_count.evaluate(0.0)[0], 0.0);
  EXPECT_DOUBLE_EQ(edge_count.evaluate(1.0)[0], 3.0);
  const auto euler = simplex_embedding(k, CoefficientTable::euler(2));
  const auto direct = euler_curve_counts(k);
  EXPECT_EQ(euler, direct);
}

TEST(SimplexEmbedding, RejectsEmptyTable) {
  EXPECT_THROW(CoefficientTable(std::vector<std::vector<double>>{}), std::invalid_argument);
  EXPECT_THROW(CoefficientTable(std::vector<std::vector<double>>{{0.0, 0.0}}), std::invalid_argument);
}
