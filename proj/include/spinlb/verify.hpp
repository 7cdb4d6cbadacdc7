#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinlb/relations.hpp"

namespace spinlb {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The symbolic product of the relation's two factors must equal the stated
/// right-hand side term by term, and all three (left x right densely, the
/// symbolic product, the stated right-hand side) must agree as matrices.
CheckResult check_relation(const Relation& relation, const RelationTable& rules);

/// Symbolic products of every pair of A+B elements on n sites against dense
/// matrix products, entrywise within 1e-10.
CheckResult check_dense_products(int n, const RelationTable& rules);

/// Normalized Gram matrix of the three full-support A-sector elements on
/// four sites equals [[9,3,3],[3,9,3],[3,3,9]] exactly.
CheckResult check_gram_example(const RelationTable& rules);

/// Closed-form A-sector count against exhaustive enumeration for 1..n_max.
CheckResult check_counts(int n_max);

/// Structure tensor entries against dense anticommutators on n sites.
CheckResult check_structure_tensor(int n, const RelationTable& rules);

/// Gram rank against the rank predicted by the two identity families.
CheckResult check_dependencies_at(int n, const RelationTable& rules);

/// Analytic objective gradient against central differences (step 1e-5) at
/// `points` random b, relative tolerance 1e-6.
CheckResult check_gradient(int n, int points, std::uint64_t seed);

/// Reconstructed rho is positive semidefinite and the objective is invariant
/// under b -> c b for c in {-1, 0.01, 100} (1e-10), for `draws` random b.
CheckResult check_positivity_and_scale(int n, int draws, std::uint64_t seed);

/// Symbolic objective against tr(H tau^2) / (tr tau^2 (n-1)) from dense
/// matrices for `draws` random b (1e-9).
CheckResult check_dense_objective(int n, int draws, std::uint64_t seed);

enum class VerifyLevel { kQuick, kFull };

/// quick: relations, Gram example, counts, dense products for n <= 4.
/// full: additionally dense products for n <= 6, structure tensors, the
/// dependency check for n = 4..8, objective gradients and properties.
std::vector<CheckResult> run_verification(VerifyLevel level,
                                          const RelationTable& rules = RelationTable::standard());

}  // namespace spinlb
