#include "spinlb/algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace spinlb {

namespace {

using Terms = OperatorPoly::Terms;

struct Factor {
  std::array<Site, 3> sites{};
  std::size_t size = 0;

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < size; ++k) m |= std::uint64_t{1} << (sites[k] - 1);
    return m;
  }
};

std::vector<Factor> factors_of(const Monomial& m) {
  std::vector<Factor> out;
  out.reserve(m.factor_count());
  for (const auto& p : m.pairs()) out.push_back({{p.first, p.second, 0}, 2});
  if (m.triple()) out.push_back({*m.triple(), 3});
  return out;
}

/// Drops factor `index` (pairs first, then the triple) from a canonical monomial.
Monomial without_factor(const Monomial& m, std::size_t index) {
  std::vector<Pair> pairs = m.pairs();
  std::optional<Triple> triple = m.triple();
  if (index < pairs.size()) {
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(index));
  } else {
    triple.reset();
  }
  return Monomial::canonicalize(std::move(pairs), triple).monomial;
}

void accumulate(Terms& out, const Monomial& m, Complex c) {
  auto [it, inserted] = out.try_emplace(m, c);
  if (!inserted) it->second += c;
}

/// Applies the rule matching the shape of f*g and returns the reduced terms.
std::vector<std::pair<Monomial, Complex>> apply_rule(const Factor& f, const Factor& g,
                                                     const RelationTable& rules) {
  const std::uint64_t shared_mask = f.mask() & g.mask();
  const auto shared = static_cast<std::size_t>(std::popcount(shared_mask));
  const Relation& rel = rules.lookup(f.size, g.size, shared);

  // Local labels split into shared / left-only / right-only classes, each
  // mapped in ascending order onto the corresponding actual sites.
  auto split = [](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> common, only;
    for (int l : a) {
      (std::find(b.begin(), b.end(), l) != b.end() ? common : only).push_back(l);
    }
    std::sort(common.begin(), common.end());
    std::sort(only.begin(), only.end());
    return std::pair{common, only};
  };
  auto [shared_t, left_only_t] = split(rel.left, rel.right);
  auto [unused, right_only_t] = split(rel.right, rel.left);

  std::vector<Site> shared_a, left_only_a, right_only_a;
  for (std::size_t k = 0; k < f.size; ++k) {
    const Site s = f.sites[k];
    ((shared_mask >> (s - 1)) & 1 ? shared_a : left_only_a).push_back(s);
  }
  for (std::size_t k = 0; k < g.size; ++k) {
    const Site s = g.sites[k];
    if (!((shared_mask >> (s - 1)) & 1)) right_only_a.push_back(s);
  }

  std::array<Site, 7> label_to_site{};
  for (std::size_t k = 0; k < shared_t.size(); ++k) label_to_site[shared_t[k]] = shared_a[k];
  for (std::size_t k = 0; k < left_only_t.size(); ++k) label_to_site[left_only_t[k]] = left_only_a[k];
  for (std::size_t k = 0; k < right_only_t.size(); ++k) label_to_site[right_only_t[k]] = right_only_a[k];

  auto orientation = [&](const std::vector<int>& labels) {
    if (labels.size() != 3) return 1;
    return triple_parity({label_to_site[labels[0]], label_to_site[labels[1]],
                          label_to_site[labels[2]]});
  };
  const double lhs_sign = orientation(rel.left) * orientation(rel.right);

  std::vector<std::pair<Monomial, Complex>> out;
  out.reserve(rel.rhs.size());
  for (const auto& term : rel.rhs) {
    std::vector<Pair> pairs;
    pairs.reserve(term.pairs.size());
    for (const auto& p : term.pairs) pairs.push_back({label_to_site[p[0]], label_to_site[p[1]]});
    std::optional<Triple> triple;
    if (term.triple) {
      const auto& t = *term.triple;
      triple = Triple{label_to_site[t[0]], label_to_site[t[1]], label_to_site[t[2]]};
    }
    auto c = Monomial::canonicalize(std::move(pairs), triple);
    out.emplace_back(std::move(c.monomial), term.coeff * (lhs_sign * c.sign));
  }
  return out;
}

/// x * y for monomials with disjoint supports.
void multiply_disjoint(const Monomial& x, const Monomial& y, Complex c, Terms& out,
                       const RelationTable& rules) {
  std::vector<Pair> pairs = x.pairs();
  pairs.insert(pairs.end(), y.pairs().begin(), y.pairs().end());

  if (x.has_triple() && y.has_triple()) {
    const Factor f{*x.triple(), 3};
    const Factor g{*y.triple(), 3};
    for (auto& [term, ct] : apply_rule(f, g, rules)) {
      std::vector<Pair> all = pairs;
      all.insert(all.end(), term.pairs().begin(), term.pairs().end());
      auto canon = Monomial::canonicalize(std::move(all), term.triple());
      accumulate(out, canon.monomial, c * ct * static_cast<double>(canon.sign));
    }
    return;
  }
  const auto& triple = x.has_triple() ? x.triple() : y.triple();
  auto canon = Monomial::canonicalize(std::move(pairs), triple);
  accumulate(out, canon.monomial, c * static_cast<double>(canon.sign));
}

Monomial monomial_of(const Factor& f) {
  if (f.size == 2) return Monomial::canonicalize({{f.sites[0], f.sites[1]}}).monomial;
  return Monomial::canonicalize({}, f.sites).monomial;
}

/// x * g for a canonical monomial x and a single factor g.
void multiply_factor_into(const Monomial& x, const Factor& g, Complex c, Terms& out,
                          const RelationTable& rules) {
  const auto fx = factors_of(x);
  const auto gm = g.mask();
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if ((fx[i].mask() & gm) == 0) continue;
    // x = x' F because factors inside one monomial commute, so x g = x' (F g).
    const Monomial x_rest = without_factor(x, i);
    for (const auto& [t, ct] : apply_rule(fx[i], g, rules)) {
      Terms partial{{x_rest, c * ct}};
      for (const auto& tf : factors_of(t)) {
        Terms next;
        for (const auto& [m, cm] : partial) multiply_factor_into(m, tf, cm, next, rules);
        partial = std::move(next);
      }
      for (const auto& [m, cm] : partial) accumulate(out, m, cm);
    }
    return;
  }
  multiply_disjoint(x, monomial_of(g), c, out, rules);
}

/// Reduces x * y one right-hand factor at a time, merging equal monomials
/// between steps.
void multiply_into(const Monomial& x, const Monomial& y, Complex c, Terms& out,
                   const RelationTable& rules) {
  Terms partial{{x, c}};
  for (const auto& g : factors_of(y)) {
    Terms next;
    for (const auto& [m, cm] : partial) {
      if (std::abs(cm) < kPruneThreshold) continue;
      multiply_factor_into(m, g, cm, next, rules);
    }
    partial = std::move(next);
  }
  for (const auto& [m, cm] : partial) accumulate(out, m, cm);
}

}  // namespace

OperatorPoly multiply(const Monomial& x, const Monomial& y, int site_count,
                      const RelationTable& rules) {
  Terms terms;
  multiply_into(x, y, 1.0, terms, rules);
  OperatorPoly out(site_count);
  for (const auto& [m, c] : terms) out.add(m, c);
  return out;
}

OperatorPoly multiply(const OperatorPoly& x, const OperatorPoly& y, const RelationTable& rules) {
  Terms terms;
  for (const auto& [mx, cx] : x.terms()) {
    for (const auto& [my, cy] : y.terms()) multiply_into(mx, my, cx * cy, terms, rules);
  }
  OperatorPoly out(std::max(x.site_count(), y.site_count()));
  for (const auto& [m, c] : terms) out.add(m, c);
  return out;
}

namespace {

/// All sets of disjoint pairs drawn from `sites` (including the empty set).
void all_matchings(const std::vector<Site>& sites, std::size_t pos, std::vector<bool>& used,
                   std::vector<Pair>& current, std::vector<std::vector<Pair>>& out) {
  while (pos < sites.size() && used[pos]) ++pos;
  if (pos == sites.size()) {
    out.push_back(current);
    return;
  }
  // Site left unpaired.
  used[pos] = true;
  all_matchings(sites, pos + 1, used, current, out);
  // Site paired with a later unused site.
  for (std::size_t k = pos + 1; k < sites.size(); ++k) {
    if (used[k]) continue;
    used[k] = true;
    current.push_back({sites[pos], sites[k]});
    all_matchings(sites, pos + 1, used, current, out);
    current.pop_back();
    used[k] = false;
  }
  used[pos] = false;
}

std::vector<std::vector<Pair>> matchings_of(const std::vector<Site>& sites) {
  std::vector<std::vector<Pair>> out;
  std::vector<bool> used(sites.size(), false);
  std::vector<Pair> current;
  all_matchings(sites, 0, used, current, out);
  return out;
}

}  // namespace

std::vector<Monomial> enumerate_basis(int n, Sector sector, int cap) {
  if (n < 1) throw std::invalid_argument("site count must be positive");
  if (n > cap) {
    throw CapacityError("basis enumeration for n=" + std::to_string(n) +
                        " exceeds the cap of " + std::to_string(cap));
  }
  std::vector<Site> sites(static_cast<std::size_t>(n));
  std::iota(sites.begin(), sites.end(), 1);

  std::vector<Monomial> out;
  for (auto& pairs : matchings_of(sites)) {
    out.push_back(Monomial::canonicalize(std::move(pairs)).monomial);
  }
  if (sector == Sector::kAB) {
    for (Site p = 1; p <= n; ++p) {
      for (Site r = p + 1; r <= n; ++r) {
        for (Site s = r + 1; s <= n; ++s) {
          std::vector<Site> rest;
          for (Site t : sites) {
            if (t != p && t != r && t != s) rest.push_back(t);
          }
          for (auto& pairs : matchings_of(rest)) {
            out.push_back(Monomial::canonicalize(std::move(pairs), Triple{p, r, s}).monomial);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), basis_order_less);
  return out;
}

std::uint64_t a_sector_count(int n) {
  if (n < 0) throw std::invalid_argument("site count must be non-negative");
  __extension__ using u128 = unsigned __int128;
  u128 total = 0;
  u128 binom = 1;         // C(n, j) for the running j
  u128 double_fact = 1;   // (2k-1)!!
  const u128 limit = static_cast<u128>(UINT64_MAX);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * static_cast<unsigned>(n - j + 1) / static_cast<unsigned>(j);
    if (j % 2 != 0) continue;
    if (j >= 2) double_fact *= static_cast<unsigned>(j - 1);
    if (binom > limit || double_fact > limit || binom * double_fact > limit) {
      throw CapacityError("A-sector count for n=" + std::to_string(n) + " exceeds 64 bits");
    }
    total += binom * double_fact;
    if (total > limit) {
      throw CapacityError("A-sector count for n=" + std::to_string(n) + " exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(total);
}

long double a_sector_count_approx(int n) {
  long double total = 0.0L;
  long double binom = 1.0L;
  long double double_fact = 1.0L;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom = binom * (n - j + 1) / j;
    if (j % 2 != 0) continue;
    if (j >= 2) double_fact *= (j - 1);
    total += binom * double_fact;
  }
  return total;
}

int count_cycles(const Monomial& x, const Monomial& y) {
  std::array<int, 65> parent{};
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int s) {
    while (parent[s] != s) s = parent[s] = parent[parent[s]];
    return s;
  };
  for (const auto* m : {&x, &y}) {
    for (const auto& p : m->pairs()) parent[find(p.first)] = find(p.second);
  }
  int cycles = 0;
  for (Site s : x.support()) {
    if (find(s) == s) ++cycles;
  }
  return cycles;
}

double trace_inner(const Monomial& x, const Monomial& y, int n, const RelationTable& rules) {
  if (x.support_mask() != y.support_mask()) return 0.0;
  const double dim = std::ldexp(1.0, n);
  if (!x.has_triple() && !y.has_triple()) {
    return dim * std::pow(3.0, count_cycles(x, y));
  }
  // Every basis element is Hermitian, and only the identity has non-zero trace.
  const Complex id = multiply(x, y, n, rules).coeff(Monomial{});
  if (std::abs(id.imag()) > 1e-9) {
    throw InternalConsistencyError("trace of a Hermitian product came out complex for " +
                                   x.to_string() + " " + y.to_string());
  }
  return dim * id.real();
}

}  // namespace spinlb
