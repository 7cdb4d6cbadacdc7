#include "spinlb/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace spinlb {

Geometry Geometry::chain(int n) {
  if (n < 1) throw std::invalid_argument("chain needs at least one site");
  Geometry g;
  g.n = n;
  SiteMap shift(static_cast<std::size_t>(n));
  SiteMap mirror(static_cast<std::size_t>(n));
  for (Site s = 1; s <= n; ++s) {
    shift[static_cast<std::size_t>(s - 1)] = s < n ? s + 1 : 0;
    mirror[static_cast<std::size_t>(s - 1)] = n + 1 - s;
  }
  g.translations.push_back(std::move(shift));
  g.point_group.push_back(std::move(mirror));
  return g;
}

std::optional<Monomial::Canonical> apply_site_map(const Monomial& m, const SiteMap& map) {
  auto image = [&](Site s) -> Site {
    if (s < 1 || static_cast<std::size_t>(s) > map.size()) return 0;
    return map[static_cast<std::size_t>(s - 1)];
  };
  std::vector<Pair> pairs;
  for (const auto& p : m.pairs()) {
    const Site a = image(p.first);
    const Site b = image(p.second);
    if (a == 0 || b == 0) return std::nullopt;
    pairs.push_back({std::min(a, b), std::max(a, b)});
  }
  std::optional<Triple> triple;
  if (m.triple()) {
    Triple t{};
    for (std::size_t k = 0; k < 3; ++k) {
      t[k] = image((*m.triple())[k]);
      if (t[k] == 0) return std::nullopt;
    }
    triple = t;
  }
  return Monomial::canonicalize(std::move(pairs), triple);
}

namespace {

std::map<Monomial, std::size_t> index_basis(const std::vector<Monomial>& basis) {
  std::map<Monomial, std::size_t> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(basis[k], k);
  return index;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<IndexPair> translation_constraints(const Geometry& geometry,
                                               const std::vector<Monomial>& basis) {
  const auto index = index_basis(basis);
  std::vector<IndexPair> out;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (const auto& t : geometry.translations) {
      const auto image = apply_site_map(basis[k], t);
      if (!image || image->monomial == basis[k]) continue;
      const auto it = index.find(image->monomial);
      if (it == index.end()) {
        throw std::invalid_argument("translate of " + basis[k].to_string() + " is not in the basis");
      }
      out.push_back({k, it->second});
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> mirror_identification(const Geometry& geometry,
                                                            const std::vector<Monomial>& basis) {
  const auto index = index_basis(basis);
  std::vector<std::size_t> parent(basis.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (const auto& g : geometry.point_group) {
      const auto image = apply_site_map(basis[k], g);
      if (!image) throw std::invalid_argument("point-group map leaves the cluster");
      if (image->sign != 1) {
        throw std::invalid_argument("point-group image of " + basis[k].to_string() +
                                    " changes sign; orbit identification needs a sign-free basis");
      }
      const auto it = index.find(image->monomial);
      if (it == index.end()) {
        throw std::invalid_argument("image of " + basis[k].to_string() + " is not in the basis");
      }
      const auto a = find_root(parent, k);
      const auto b = find_root(parent, it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < basis.size(); ++k) groups[find_root(parent, k)].push_back(k);
  std::vector<std::vector<std::size_t>> orbits;
  for (auto& [root, members] : groups) orbits.push_back(std::move(members));
  std::sort(orbits.begin(), orbits.end());
  return orbits;
}

std::vector<IndexPair> residual_constraints(const std::vector<IndexPair>& translation,
                                            const std::vector<std::vector<std::size_t>>& orbits) {
  std::map<std::size_t, std::size_t> rep;
  for (const auto& orbit : orbits) {
    for (std::size_t k : orbit) rep[k] = orbit.front();
  }
  std::set<IndexPair> kept;
  for (const auto& [a, b] : translation) {
    const auto ra = rep.at(a);
    const auto rb = rep.at(b);
    if (ra == rb) continue;
    kept.insert({std::min(ra, rb), std::max(ra, rb)});
  }
  return {kept.begin(), kept.end()};
}

ConstraintSet ConstraintSet::build(const Geometry& geometry, const std::vector<Monomial>& basis) {
  ConstraintSet c;
  c.a_equalities = translation_constraints(geometry, basis);
  c.b_orbits = mirror_identification(geometry, basis);
  c.residual = residual_constraints(c.a_equalities, c.b_orbits);
  c.normalization = 0;
  return c;
}

std::vector<std::size_t> ConstraintSet::orbit_of(std::size_t basis_size) const {
  std::vector<std::size_t> out(basis_size, basis_size);
  for (std::size_t o = 0; o < b_orbits.size(); ++o) {
    for (std::size_t k : b_orbits[o]) out.at(k) = o;
  }
  if (std::find(out.begin(), out.end(), basis_size) != out.end()) {
    throw std::invalid_argument("orbits do not cover the basis");
  }
  return out;
}

nlohmann::json ConstraintSet::to_json() const {
  auto pairs = [](const std::vector<IndexPair>& list) {
    auto arr = nlohmann::json::array();
    for (const auto& p : list) arr.push_back({p.first, p.second});
    return arr;
  };
  return {{"a_equalities", pairs(a_equalities)},
          {"b_orbits", b_orbits},
          {"residual", pairs(residual)},
          {"normalization", normalization}};
}

ConstraintSet ConstraintSet::from_json(const nlohmann::json& doc) {
  auto pairs = [](const nlohmann::json& arr) {
    std::vector<IndexPair> out;
    for (const auto& p : arr) out.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
    return out;
  };
  ConstraintSet c;
  c.a_equalities = pairs(doc.at("a_equalities"));
  c.b_orbits = doc.at("b_orbits").get<std::vector<std::vector<std::size_t>>>();
  c.residual = pairs(doc.at("residual"));
  c.normalization = doc.at("normalization").get<std::size_t>();
  return c;
}

}  // namespace spinlb
