#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spinlb/algebra.hpp"

namespace spinlb {

inline constexpr int kDependencySiteCap = 8;

/// Gram matrix tr(X_a^dagger X_b) / 2^n over the given elements.
Eigen::MatrixXd gram_matrix(const std::vector<Monomial>& elements, int n,
                            const RelationTable& rules = RelationTable::standard());

/// Instances of the five-term identity on five distinct sites a < ... (with a
/// chosen lead site), each multiplied by every A-sector monomial on the
/// remaining sites:
///   (ab)[cde] - (ac)[bde] + (ad)[bce] - (ae)[bcd] = 0.
std::vector<OperatorPoly> five_term_instances(int n);

/// Instances of det[(s_i s_j)]_{i in R, j in C} = 0 for disjoint site
/// quadruples R, C, each multiplied by every A-sector monomial on the
/// remaining sites. Empty below eight sites.
std::vector<OperatorPoly> determinant_instances(int n);

/// Numerical rank with singular values below `rel_tol * largest` treated as
/// zero. `ambiguous` is set when a singular value falls inside the gray zone
/// [1e-3 * rel_tol, 1e3 * rel_tol] relative to the largest.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol, bool* ambiguous = nullptr);

struct DependencyReport {
  int n = 0;
  std::size_t set_size = 0;
  std::size_t five_term_count = 0;
  std::size_t determinant_count = 0;
  Eigen::Index gram_rank = 0;
  Eigen::Index predicted_rank = 0;
  bool verified = false;
  bool ill_conditioned = false;
};

/// Compares the rank of the A+B Gram matrix with the rank left after
/// quotienting the free span by every instance of the two identity families.
DependencyReport check_dependencies(int n, int cap = kDependencySiteCap,
                                    const RelationTable& rules = RelationTable::standard());

}  // namespace spinlb
