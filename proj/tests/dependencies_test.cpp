#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "spinlb/dependencies.hpp"
#include "spinlb/oracle.hpp"

using namespace spinlb;

TEST(DependenciesTest, HypothesisHoldsForSmallClusters) {
  for (int n = 4; n <= 6; ++n) {
    const auto r = check_dependencies(n);
    EXPECT_TRUE(r.verified) << "n=" << n << " gram " << r.gram_rank << " predicted " << r.predicted_rank;
    EXPECT_FALSE(r.ill_conditioned) << n;
  }
}

TEST(DependenciesTest, FiveSiteNumbers) {
  const auto r = check_dependencies(5);
  EXPECT_EQ(r.set_size, 46u);
  EXPECT_EQ(r.five_term_count, 5u);
  EXPECT_EQ(r.determinant_count, 0u);
  EXPECT_EQ(r.gram_rank, 42);
  EXPECT_EQ(r.predicted_rank, 42);
}

TEST(DependenciesTest, GramRankMatchesDenseVectorRank) {
  // Rank of the flattened dense matrices, independent of the trace rules.
  const int n = 5;
  const auto basis = enumerate_basis(n, Sector::kAB);
  const Eigen::Index dim = 1 << n;
  Eigen::MatrixXd vectors(2 * dim * dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Eigen::MatrixXcd m = represent(basis[k], n).matrix();
    const Eigen::Map<const Eigen::VectorXcd> flat(m.data(), dim * dim);
    vectors.col(static_cast<Eigen::Index>(k)) << flat.real(), flat.imag();
  }
  EXPECT_EQ(numerical_rank(vectors, 1e-9), 42);
}

TEST(DependenciesTest, FiveTermInstancesVanishDensely) {
  for (int n = 5; n <= 6; ++n) {
    const auto instances = five_term_instances(n);
    for (const auto& p : instances) {
      EXPECT_LT(represent(p, n).matrix().cwiseAbs().maxCoeff(), 1e-10) << p.to_string();
    }
  }
}

TEST(DependenciesTest, DeterminantInstancesVanishDensely) {
  const auto instances = determinant_instances(8);
  ASSERT_EQ(instances.size(), 35u);
  for (const auto& p : instances) {
    EXPECT_EQ(p.size(), 24u);
    EXPECT_LT(represent(p, 8).matrix().cwiseAbs().maxCoeff(), 1e-10) << p.to_string();
  }
  EXPECT_TRUE(determinant_instances(7).empty());
}

TEST(DependenciesTest, NumericalRank) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-11;
  bool ambiguous = true;
  EXPECT_EQ(numerical_rank(m, 1e-9, &ambiguous), 1);
  EXPECT_TRUE(ambiguous);
  m(1, 1) = 1e-20;
  EXPECT_EQ(numerical_rank(m, 1e-9, &ambiguous), 1);
  EXPECT_FALSE(ambiguous);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(2, 4), 1e-9), 0);
}

TEST(DependenciesTest, CapacityError) { EXPECT_THROW(check_dependencies(9), CapacityError); }
