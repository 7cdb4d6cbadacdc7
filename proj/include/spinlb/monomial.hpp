#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spinlb {

/// Lattice site label. Sites are numbered from 1.
using Site = int;

struct Pair {
  Site first = 0;
  Site second = 0;
  auto operator<=>(const Pair&) const = default;
};

using Triple = std::array<Site, 3>;

class MalformedMonomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A product of scalar products (s_i s_j) over disjoint site pairs, optionally
/// times one mixed product (s_p s_r s_s) on further disjoint sites.
///
/// Pairs are stored with first < second and sorted; the triple is stored in
/// ascending order. The mixed product is totally antisymmetric, so reordering
/// a triple produces a sign which `canonicalize` hands back to the caller.
/// A default-constructed monomial is the identity operator.
class Monomial {
 public:
  struct Canonical;

  Monomial() = default;

  /// Builds the canonical monomial and the sign picked up by sorting the
  /// triple. Throws MalformedMonomial on repeated or non-positive sites.
  static Canonical canonicalize(std::vector<Pair> pairs,
                                std::optional<Triple> triple = std::nullopt);

  /// Convenience for already-canonical input (asserts sign == +1).
  static Monomial of(std::vector<Pair> pairs,
                     std::optional<Triple> triple = std::nullopt);

  /// Parses "1", "(1,2)(3,4)", "[1,2,3](4,5)"; the triple may be unsorted.
  static Canonical parse(std::string_view text);

  const std::vector<Pair>& pairs() const { return pairs_; }
  const std::optional<Triple>& triple() const { return triple_; }

  bool is_identity() const { return pairs_.empty() && !triple_; }
  bool has_triple() const { return triple_.has_value(); }
  std::size_t factor_count() const { return pairs_.size() + (triple_ ? 1 : 0); }

  /// Sorted list of all sites touched.
  std::vector<Site> support() const;
  std::size_t support_size() const { return 2 * pairs_.size() + (triple_ ? 3 : 0); }
  /// Bitmask of touched sites (bit s-1 for site s).
  std::uint64_t support_mask() const;
  Site max_site() const;

  std::string to_string() const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

 private:
  std::vector<Pair> pairs_;
  std::optional<Triple> triple_;
};

struct Monomial::Canonical {
  Monomial monomial;
  int sign = 1;
};

/// Parity (+1/-1) of the permutation that sorts three distinct values.
int triple_parity(const Triple& t);

/// Ordering used for basis enumeration: identity first, then by support
/// size, triple-free before triple-carrying, then lexicographic.
bool basis_order_less(const Monomial& a, const Monomial& b);

}  // namespace spinlb
