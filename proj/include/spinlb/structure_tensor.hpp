#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include "spinlb/algebra.hpp"

namespace spinlb {

inline constexpr int kStructureTensorFormatVersion = 1;

/// One stored upper-triangle entry of C_k, i <= j.
struct TensorEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

/// Symmetrized multiplication table of the A-sector on n sites:
///   (A_i A_j + A_j A_i) / 2 = sum_k C_k(i,j) A_k.
/// For tau = sum_i b_i A_i this gives tau^2 = sum_k (b^T C_k b) A_k.
class StructureTensor {
 public:
  StructureTensor(int n, std::vector<Monomial> basis, std::vector<std::vector<TensorEntry>> coeffs);

  int site_count() const { return n_; }
  std::size_t size() const { return basis_.size(); }
  const std::vector<Monomial>& basis() const { return basis_; }
  const std::vector<TensorEntry>& entries(std::size_t k) const { return coeffs_.at(k); }

  /// Throws std::out_of_range for monomials outside the basis.
  std::size_t index_of(const Monomial& m) const;

  /// C_k(i,j), symmetric in i,j.
  double coeff(std::size_t k, std::size_t i, std::size_t j) const;

  /// Full symmetric sparse C_k.
  Eigen::SparseMatrix<double> matrix(std::size_t k) const;

  /// b^T C_k b for every k.
  Eigen::VectorXd square_coefficients(const Eigen::VectorXd& b) const;

  /// Coefficients a_k of rho = 2^-n sum_k a_k A_k with rho = tau^2 / tr tau^2;
  /// a_0 = 1 by construction.
  Eigen::VectorXd density_coefficients(const Eigen::VectorXd& b) const;

  nlohmann::json to_json() const;
  static StructureTensor from_json(const nlohmann::json& doc);

 private:
  int n_;
  std::vector<Monomial> basis_;
  std::vector<std::vector<TensorEntry>> coeffs_;
  std::map<Monomial, std::size_t> index_;
};

/// Builds the tensor from the symbolic products of all basis pairs.
///
/// The mixed-product part of each anticommutator must vanish; a residue
/// above `tolerance` (checked coefficient-wise, then as an operator norm)
/// raises InternalConsistencyError.
StructureTensor build_structure_tensor(int n, const RelationTable& rules = RelationTable::standard(),
                                       double tolerance = 1e-10);

/// FNV-1a hash of the ordered basis strings; keys cached artifacts.
std::uint64_t basis_hash(const std::vector<Monomial>& basis);

}  // namespace spinlb
