#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinlb/operator_poly.hpp"

namespace spinlb {

/// Collision shapes between one factor of a left monomial and one factor of
/// a right monomial. The name spells out (left factor, right factor, shared
/// sites).
enum class RelationKind {
  kPairPairTwo,        // (12)(12)
  kPairPairOne,        // (12)(23)
  kPairTripleTwo,      // (12)[123]
  kTriplePairTwo,      // [123](12)
  kPairTripleOne,      // (12)[234]
  kTriplePairOne,      // [234](12)
  kTripleTripleThree,  // [123][123]
  kTripleTripleTwo,    // [123][124]
  kTripleTripleOne,    // [123][145]
  kTripleTripleZero,   // [123][456], the determinant of scalar products
};

inline constexpr std::size_t kRelationCount = 10;

/// One product term written over local labels 1..6.
struct RelationTerm {
  Complex coeff;
  std::vector<std::array<int, 2>> pairs;
  std::optional<std::array<int, 3>> triple;
};

/// Left factor times right factor equals the sum of `rhs`, all written over
/// local labels. A factor with two labels is a scalar product, three labels a
/// mixed product in the stated order.
struct Relation {
  RelationKind kind;
  std::string name;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<RelationTerm> rhs;
};

/// Rewrite rules used by `multiply`. Kept as data so that the verification
/// suite can be pointed at a deliberately corrupted table.
class RelationTable {
 public:
  /// The nine two-factor reduction identities plus the determinant rule.
  static const RelationTable& standard();

  const Relation& at(RelationKind kind) const { return relations_[index(kind)]; }
  Relation& at(RelationKind kind) { return relations_[index(kind)]; }
  const std::vector<Relation>& all() const { return relations_; }

  /// Rule for a left factor of `left_size` sites, right factor of
  /// `right_size` sites, sharing `shared` sites.
  const Relation& lookup(std::size_t left_size, std::size_t right_size, std::size_t shared) const;

 private:
  RelationTable();
  static std::size_t index(RelationKind kind) { return static_cast<std::size_t>(kind); }

  std::vector<Relation> relations_;
};

}  // namespace spinlb
