#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spinlb/operator_poly.hpp"
#include "spinlb/relations.hpp"

namespace spinlb {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Product of two canonical monomials reduced to the span of disjoint-support
/// monomials with at most one mixed product.
///
/// Factors of y are absorbed left to right. Each absorption rewrites the
/// leftmost factor of the running monomial that shares a site with the
/// incoming factor, using the matching rule from `rules`, until supports are
/// disjoint; two disjoint mixed products go through the determinant rule.
OperatorPoly multiply(const Monomial& x, const Monomial& y, int site_count,
                      const RelationTable& rules = RelationTable::standard());

OperatorPoly multiply(const OperatorPoly& x, const OperatorPoly& y,
                      const RelationTable& rules = RelationTable::standard());

enum class Sector {
  kA,   ///< identity and products of scalar products
  kAB,  ///< additionally everything with one mixed product
};

inline constexpr int kDefaultEnumerationCap = 12;

/// Basis monomials on sites 1..n in the canonical order (identity, then by
/// support size, then lexicographic; mixed-product elements after all
/// A-sector elements).
std::vector<Monomial> enumerate_basis(int n, Sector sector,
                                      int cap = kDefaultEnumerationCap);

/// Size of the A-sector on n sites including the identity:
/// sum_k C(n,2k) (2k-1)!!. Throws CapacityError if it overflows 64 bits.
std::uint64_t a_sector_count(int n);

/// Same count evaluated in floating point, for sizes beyond 64 bits.
long double a_sector_count_approx(int n);

/// Number of closed cycles formed by superimposing the bonds of two
/// A-sector monomials with identical support.
int count_cycles(const Monomial& x, const Monomial& y);

/// tr(X^dagger Y) over n sites for X, Y in the A or B sector.
///
/// Differing supports give 0. Two A-sector elements with equal support give
/// 2^n 3^C from the cycle count. Anything with a mixed product is evaluated
/// as 2^n times the identity coefficient of the reduced product X Y.
double trace_inner(const Monomial& x, const Monomial& y, int n,
                   const RelationTable& rules = RelationTable::standard());

}  // namespace spinlb
