#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "spinlb/oracle.hpp"

using namespace spinlb;

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::array<Eigen::Matrix2cd, 3> paulis() {
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -kI, kI, 0;
  z << 1, 0, 0, -1;
  return {x, y, z};
}

/// Smallest eigenvalue by power iteration on (shift I - A), an oracle that
/// shares nothing with the Jacobi solver.
double power_iteration_min(const Eigen::MatrixXd& a) {
  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  const Eigen::MatrixXd m = shift * Eigen::MatrixXd::Identity(a.rows(), a.cols()) - a;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> draw;
  Eigen::VectorXd v(a.rows());
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = draw(rng);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd w = m * v;
    const double next = v.dot(w) / v.squaredNorm();
    v = w.normalized();
    if (std::abs(next - lambda) < 1e-15 * shift && it > 100) break;
    lambda = next;
  }
  return shift - lambda;
}

Eigen::MatrixXd random_symmetric(int size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  Eigen::MatrixXd a(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) a(i, j) = draw(rng);
  }
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST(OracleTest, SingleSitePaulis) {
  const auto p = paulis();
  for (int axis = 0; axis < 3; ++axis) {
    EXPECT_EQ(pauli_on_site(1, 1, axis), Eigen::MatrixXcd(p[static_cast<std::size_t>(axis)])) << axis;
  }
}

TEST(OracleTest, SiteOneIsLeftmostKroneckerFactor) {
  const auto p = paulis();
  const Eigen::MatrixXcd id = Eigen::Matrix2cd::Identity();
  EXPECT_EQ(pauli_on_site(3, 1, 2), kron(kron(p[2], id), id));
  EXPECT_EQ(pauli_on_site(3, 3, 1), kron(kron(id, id), p[1]));
}

TEST(OracleTest, ScalarProductOnTwoSites) {
  Eigen::Matrix4cd expected;
  expected << 1, 0, 0, 0, 0, -1, 2, 0, 0, 2, -1, 0, 0, 0, 0, 1;
  EXPECT_EQ(represent(Monomial::of({{1, 2}}), 2).matrix(), Eigen::MatrixXcd(expected));
}

TEST(OracleTest, MixedProductFromLeviCivitaSum) {
  const auto p = paulis();
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  const int perms[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1},
                           {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
  for (const auto& q : perms) {
    expected += static_cast<double>(q[3]) * kron(kron(p[q[0]], p[q[1]]), p[q[2]]);
  }
  const auto got = represent(Monomial::of({}, Triple{1, 2, 3}), 3);
  EXPECT_LT((got.matrix() - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(got.is_hermitian());
  EXPECT_FALSE(DenseOperator(3, kI * got.matrix()).is_hermitian());
}

TEST(OracleTest, NonIdentityMonomialsAreTraceless) {
  for (const auto* text : {"(1,2)", "(1,3)(2,4)", "[1,2,3]", "[2,3,4](1,5)"}) {
    const auto m = Monomial::parse(text).monomial;
    EXPECT_LT(std::abs(represent(m, 5).matrix().trace()), 1e-12) << text;
  }
  EXPECT_EQ(represent(Monomial(), 3).matrix().trace(), Complex(8.0));
}

TEST(OracleTest, CapacityAndArgumentErrors) {
  EXPECT_THROW(represent(Monomial::of({{1, 2}}), 11), CapacityError);
  EXPECT_THROW(represent(Monomial::of({{1, 2}}), 6, 5), CapacityError);
  EXPECT_THROW(represent(Monomial::of({{1, 4}}), 3), MalformedMonomial);
  EXPECT_THROW(DenseOperator(2, Eigen::MatrixXcd::Zero(3, 3)), std::invalid_argument);
}

TEST(OracleTest, ScalarProductSpectrum) {
  const auto values = eigenvalues(represent(Monomial::of({{1, 2}}), 2));
  ASSERT_EQ(values.size(), 4);
  EXPECT_NEAR(values(0), -3.0, 1e-12);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(values(k), 1.0, 1e-12);
}

TEST(OracleTest, JacobiMatchesEigenOnRandomSymmetric) {
  std::mt19937_64 rng(11);
  for (int size : {1, 2, 5, 20, 40}) {
    const auto a = random_symmetric(size, rng);
    const Eigen::VectorXd ours = jacobi_eigenvalues(a);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-10) << size;
  }
}

TEST(OracleTest, ComplexHermitianThroughEmbedding) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  Eigen::MatrixXcd a(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) a(i, j) = Complex(draw(rng), draw(rng));
  }
  a = (0.5 * (a + a.adjoint())).eval();
  const Eigen::VectorXd ours = eigenvalues(DenseOperator(3, a));
  const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a).eigenvalues();
  ASSERT_EQ(ours.size(), 8);
  EXPECT_LT((ours - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(OracleTest, ChainGroundStateAgainstPowerIteration) {
  for (int n = 2; n <= 6; ++n) {
    OperatorPoly h(n);
    for (Site s = 1; s < n; ++s) h.add(Monomial::of({{s, s + 1}}), 1.0);
    const auto op = represent(h, n);
    EXPECT_NEAR(min_eigenvalue(op), power_iteration_min(op.matrix().real()), 1e-9) << n;
  }
}

TEST(OracleTest, FourSiteChainClosedForm) {
  OperatorPoly h(4);
  for (Site s = 1; s < 4; ++s) h.add(Monomial::of({{s, s + 1}}), 1.0);
  EXPECT_NEAR(min_eigenvalue(represent(h, 4)), -3.0 - 2.0 * std::sqrt(3.0), 1e-10);
}

TEST(OracleTest, NonHermitianRejected) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(min_eigenvalue(DenseOperator(1, a)), ContractViolation);
  // (12)(23) = (13) - i[123] is not Hermitian.
  const Eigen::MatrixXcd product =
      represent(Monomial::of({{1, 2}}), 3).matrix() * represent(Monomial::of({{2, 3}}), 3).matrix();
  EXPECT_THROW(min_eigenvalue(DenseOperator(3, product)), ContractViolation);
}

TEST(OracleTest, SpectrumPositivity) {
  // Singlet projector (1 - s1.s2) / 4 is positive; s1.s2 itself is not.
  OperatorPoly singlet(2);
  singlet.add(Monomial(), 0.25);
  singlet.add(Monomial::of({{1, 2}}), -0.25);
  EXPECT_TRUE(spectrum_positivity(represent(singlet, 2)));
  EXPECT_FALSE(spectrum_positivity(represent(Monomial::of({{1, 2}}), 2)));
}
