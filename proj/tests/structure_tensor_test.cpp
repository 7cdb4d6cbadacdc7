#include <gtest/gtest.h>

#include <random>

#include "spinlb/dependencies.hpp"
#include "spinlb/oracle.hpp"
#include "spinlb/structure_tensor.hpp"
#include "spinlb/verify.hpp"

using namespace spinlb;

namespace {

Eigen::MatrixXd dense_of(const Eigen::SparseMatrix<double>& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST(StructureTensorTest, TwoSites) {
  // (s1.s2)^2 = 3 - 2 (s1.s2).
  const auto t = build_structure_tensor(2, RelationTable::standard());
  ASSERT_EQ(t.size(), 2u);
  Eigen::Matrix2d c0, c1;
  c0 << 1, 0, 0, 3;
  c1 << 0, 1, 1, -2;
  EXPECT_EQ(dense_of(t.matrix(0)), Eigen::MatrixXd(c0));
  EXPECT_EQ(dense_of(t.matrix(1)), Eigen::MatrixXd(c1));
}

TEST(StructureTensorTest, IdentityComponentIsTheGramMatrix) {
  for (int n = 2; n <= 5; ++n) {
    const auto t = build_structure_tensor(n, RelationTable::standard());
    const Eigen::MatrixXd gram = gram_matrix(t.basis(), n);
    EXPECT_LT((dense_of(t.matrix(0)) - gram).cwiseAbs().maxCoeff(), 1e-12) << n;
  }
}

TEST(StructureTensorTest, MatricesAreSymmetric) {
  const auto t = build_structure_tensor(5, RelationTable::standard());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Eigen::MatrixXd c = dense_of(t.matrix(k));
    EXPECT_EQ(c, c.transpose());
  }
}

TEST(StructureTensorTest, AnticommutatorsMatchDense) {
  for (int n = 2; n <= 5; ++n) {
    const auto r = check_structure_tensor(n, RelationTable::standard());
    EXPECT_TRUE(r.passed) << r.detail;
  }
}

TEST(StructureTensorTest, SquareCoefficientsReproduceDenseSquare) {
  const int n = 5;
  const auto t = build_structure_tensor(n, RelationTable::standard());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  Eigen::VectorXd b(static_cast<Eigen::Index>(t.size()));
  for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = draw(rng);

  Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(32, 32);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(32, 32);
  const Eigen::VectorXd a = t.square_coefficients(b);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Eigen::MatrixXcd m = represent(t.basis()[k], n).matrix();
    tau += b(static_cast<Eigen::Index>(k)) * m;
    expected += a(static_cast<Eigen::Index>(k)) * m;
  }
  EXPECT_LT((tau * tau - expected).cwiseAbs().maxCoeff(), 1e-10);

  const Eigen::VectorXd normalized = t.density_coefficients(b);
  EXPECT_DOUBLE_EQ(normalized(0), 1.0);
}

TEST(StructureTensorTest, CoeffLookup) {
  const auto t = build_structure_tensor(3, RelationTable::standard());
  const auto i12 = t.index_of(Monomial::of({{1, 2}}));
  const auto i23 = t.index_of(Monomial::of({{2, 3}}));
  const auto i13 = t.index_of(Monomial::of({{1, 3}}));
  // {(12),(23)}/2 = (13).
  EXPECT_EQ(t.coeff(i13, i12, i23), 1.0);
  EXPECT_EQ(t.coeff(i13, i23, i12), 1.0);
  EXPECT_EQ(t.coeff(0, i12, i23), 0.0);
  EXPECT_THROW(t.index_of(Monomial::of({}, Triple{1, 2, 3})), std::out_of_range);
}

TEST(StructureTensorTest, JsonRoundTrip) {
  const auto t = build_structure_tensor(4, RelationTable::standard());
  const auto doc = t.to_json();
  const auto back = StructureTensor::from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.basis(), t.basis());
  EXPECT_EQ(back.site_count(), 4);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_EQ(dense_of(back.matrix(k)), dense_of(t.matrix(k)));
  }
  auto bad = doc;
  bad["version"] = kStructureTensorFormatVersion + 1;
  EXPECT_THROW(StructureTensor::from_json(bad), std::runtime_error);
}

TEST(StructureTensorTest, BasisHashTracksOrder) {
  auto basis = enumerate_basis(4, Sector::kA);
  const auto h = basis_hash(basis);
  EXPECT_EQ(h, basis_hash(enumerate_basis(4, Sector::kA)));
  std::swap(basis[1], basis[2]);
  EXPECT_NE(h, basis_hash(basis));
}

TEST(StructureTensorTest, RejectsMalformedEntries) {
  std::vector<Monomial> basis{Monomial()};
  EXPECT_THROW(StructureTensor(1, basis, {{{0, 1, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(StructureTensor(1, basis, {}), std::invalid_argument);
}
