#pragma once

#include <stdexcept>

#include <Eigen/Dense>

#include "spinlb/algebra.hpp"

namespace spinlb {

inline constexpr int kDenseSiteCap = 10;

class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Explicit 2^n x 2^n matrix of an operator on n spins. Site 1 is the
/// leftmost Kronecker factor (most significant bit of the row index).
class DenseOperator {
 public:
  DenseOperator(int n, Eigen::MatrixXcd matrix);

  int site_count() const { return n_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  bool is_hermitian(double tol = 1e-10) const;

 private:
  int n_;
  Eigen::MatrixXcd matrix_;
};

DenseOperator represent(const Monomial& m, int n, int cap = kDenseSiteCap);
DenseOperator represent(const OperatorPoly& p, int n, int cap = kDenseSiteCap);

/// Matrix of sigma^axis on `site` (axis 0,1,2 = x,y,z).
Eigen::MatrixXcd pauli_on_site(int n, Site site, int axis);

/// All eigenvalues (ascending) of a real symmetric matrix by cyclic Jacobi
/// rotations, iterated until the off-diagonal Frobenius mass drops below
/// 1e-12 relative to the matrix norm.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a);

/// Ascending eigenvalues of a Hermitian operator. Real matrices are
/// diagonalized directly, complex ones through the real symmetric embedding
/// [[Re, -Im], [Im, Re]] whose spectrum is the original one doubled.
Eigen::VectorXd eigenvalues(const DenseOperator& op);

/// Smallest eigenvalue. Throws ContractViolation for non-Hermitian input.
double min_eigenvalue(const DenseOperator& op);

/// True iff every eigenvalue is >= -1e-9.
bool spectrum_positivity(const DenseOperator& op);

}  // namespace spinlb
