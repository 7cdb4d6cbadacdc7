#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlb/monomial.hpp"

namespace spinlb {

/// Image of each site under a site map: entry s-1 holds the image of site s,
/// or 0 when the site is carried outside the cluster.
using SiteMap = std::vector<Site>;

/// Cluster geometry given by generators: translations may carry sites out of
/// the cluster, point-group maps must be permutations of the cluster.
struct Geometry {
  int n = 0;
  std::vector<SiteMap> translations;
  std::vector<SiteMap> point_group;

  /// Open chain of n sites: shift by +1 and the mirror i -> n+1-i.
  static Geometry chain(int n);
};

/// Applies a site map to a monomial. Returns nullopt when any site of the
/// support leaves the cluster; otherwise the canonical image and its sign.
std::optional<Monomial::Canonical> apply_site_map(const Monomial& m, const SiteMap& map);

struct IndexPair {
  std::size_t first = 0;
  std::size_t second = 0;
  auto operator<=>(const IndexPair&) const = default;
};

/// Equalities a_k = a_k' between each basis element and its translate, for
/// every translation that keeps the element inside the cluster.
std::vector<IndexPair> translation_constraints(const Geometry& geometry,
                                               const std::vector<Monomial>& basis);

/// Orbits of basis indices under the point group. Each orbit is sorted and
/// orbits are ordered by their smallest member, so the identity is orbit 0.
std::vector<std::vector<std::size_t>> mirror_identification(const Geometry& geometry,
                                                            const std::vector<Monomial>& basis);

/// Translation equalities not implied by constant b on each orbit. Each
/// surviving equality is expressed between orbit representatives (smallest
/// member), with duplicates removed.
std::vector<IndexPair> residual_constraints(const std::vector<IndexPair>& translation,
                                            const std::vector<std::vector<std::size_t>>& orbits);

struct ConstraintSet {
  std::vector<IndexPair> a_equalities;
  std::vector<std::vector<std::size_t>> b_orbits;
  std::vector<IndexPair> residual;
  std::size_t normalization = 0;

  static ConstraintSet build(const Geometry& geometry, const std::vector<Monomial>& basis);

  /// Orbit id of every basis index.
  std::vector<std::size_t> orbit_of(std::size_t basis_size) const;

  nlohmann::json to_json() const;
  static ConstraintSet from_json(const nlohmann::json& doc);
};

}  // namespace spinlb
