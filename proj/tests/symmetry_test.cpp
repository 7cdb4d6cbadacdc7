#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "spinlb/oracle.hpp"
#include "spinlb/structure_tensor.hpp"
#include "spinlb/symmetry.hpp"

using namespace spinlb;

namespace {

using NamePair = std::pair<std::string, std::string>;

std::set<NamePair> named(const std::vector<IndexPair>& list, const std::vector<Monomial>& basis) {
  std::set<NamePair> out;
  for (const auto& [a, b] : list) out.insert({basis[a].to_string(), basis[b].to_string()});
  return out;
}

std::set<std::set<std::string>> named(const std::vector<std::vector<std::size_t>>& orbits,
                                      const std::vector<Monomial>& basis) {
  std::set<std::set<std::string>> out;
  for (const auto& orbit : orbits) {
    std::set<std::string> names;
    for (auto k : orbit) names.insert(basis[k].to_string());
    out.insert(names);
  }
  return out;
}

/// Shifted copy by direct comparison of pair lists, without site maps.
bool is_shift_of(const Monomial& x, const Monomial& y) {
  if (x.has_triple() || y.has_triple() || x.pairs().size() != y.pairs().size()) return false;
  std::vector<Pair> shifted;
  for (const auto& p : x.pairs()) shifted.push_back({p.first + 1, p.second + 1});
  std::sort(shifted.begin(), shifted.end());
  return !x.is_identity() && shifted == y.pairs();
}

/// Permutation operator reversing the order of n sites.
Eigen::MatrixXcd reversal(int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::Index j = 0;
    for (int bit = 0; bit < n; ++bit) {
      if (i & (Eigen::Index{1} << bit)) j |= Eigen::Index{1} << (n - 1 - bit);
    }
    r(j, i) = 1.0;
  }
  return r;
}

}  // namespace

TEST(SymmetryTest, FourSiteConstraintsGolden) {
  const auto basis = enumerate_basis(4, Sector::kA);
  const auto cs = ConstraintSet::build(Geometry::chain(4), basis);
  EXPECT_EQ(named(cs.a_equalities, basis),
            (std::set<NamePair>{{"(1,2)", "(2,3)"}, {"(2,3)", "(3,4)"}, {"(1,3)", "(2,4)"}}));
  EXPECT_EQ(named(cs.b_orbits, basis),
            (std::set<std::set<std::string>>{{"1"},
                                             {"(1,2)", "(3,4)"},
                                             {"(1,3)", "(2,4)"},
                                             {"(2,3)"},
                                             {"(1,4)"},
                                             {"(1,2)(3,4)"},
                                             {"(1,3)(2,4)"},
                                             {"(1,4)(2,3)"}}));
  EXPECT_EQ(named(cs.residual, basis), (std::set<NamePair>{{"(1,2)", "(2,3)"}}));
  EXPECT_EQ(cs.normalization, 0u);
  EXPECT_EQ(cs.b_orbits.front(), std::vector<std::size_t>{0});
}

TEST(SymmetryTest, ShiftLeavingClusterEmitsNothing) {
  const auto basis = enumerate_basis(4, Sector::kA);
  const auto eqs = translation_constraints(Geometry::chain(4), basis);
  for (const auto& [a, b] : eqs) {
    EXPECT_NE(basis[a].to_string(), "(1,2)(3,4)");
    EXPECT_NE(basis[a].to_string(), "(3,4)");
  }
}

TEST(SymmetryTest, FiveSiteTranslationsMatchBruteForce) {
  const auto basis = enumerate_basis(5, Sector::kA);
  std::set<IndexPair> expected;
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (is_shift_of(basis[a], basis[b])) expected.insert({a, b});
    }
  }
  const auto eqs = translation_constraints(Geometry::chain(5), basis);
  EXPECT_EQ(std::set<IndexPair>(eqs.begin(), eqs.end()), expected);
  EXPECT_EQ(eqs.size(), expected.size());
  EXPECT_TRUE(named(eqs, basis).count({"(1,2)(3,4)", "(2,3)(4,5)"}));
}

TEST(SymmetryTest, FiveSiteMirrorOrbits) {
  const auto basis = enumerate_basis(5, Sector::kA);
  const auto orbits = named(mirror_identification(Geometry::chain(5), basis), basis);
  EXPECT_TRUE(orbits.count({"(1,2)", "(4,5)"}));
  EXPECT_TRUE(orbits.count({"(2,3)", "(3,4)"}));
  EXPECT_TRUE(orbits.count({"(1,5)"}));
}

TEST(SymmetryTest, MirrorImageMatchesDenseConjugation) {
  for (int n = 2; n <= 6; ++n) {
    const auto geometry = Geometry::chain(n);
    const Eigen::MatrixXcd r = reversal(n);
    for (const auto& m : enumerate_basis(n, Sector::kAB)) {
      const auto image = apply_site_map(m, geometry.point_group.front());
      ASSERT_TRUE(image);
      const Eigen::MatrixXcd expected = r * represent(m, n).matrix() * r.adjoint();
      const Eigen::MatrixXcd got = static_cast<double>(image->sign) * represent(image->monomial, n).matrix();
      EXPECT_LT((got - expected).cwiseAbs().maxCoeff(), 1e-12) << m.to_string();
    }
  }
}

TEST(SymmetryTest, SmallClustersHaveNoResidual) {
  for (int n : {2, 3}) {
    const auto basis = enumerate_basis(n, Sector::kA);
    const auto cs = ConstraintSet::build(Geometry::chain(n), basis);
    EXPECT_TRUE(cs.residual.empty()) << n;
  }
  const auto basis3 = enumerate_basis(3, Sector::kA);
  const auto cs3 = ConstraintSet::build(Geometry::chain(3), basis3);
  EXPECT_EQ(named(cs3.a_equalities, basis3), (std::set<NamePair>{{"(1,2)", "(2,3)"}}));
  EXPECT_TRUE(named(cs3.b_orbits, basis3).count({"(1,2)", "(2,3)"}));
}

TEST(SymmetryTest, ResidualKeepsOnlyCrossOrbitPairs) {
  const std::vector<std::vector<std::size_t>> orbits{{0}, {1, 3}, {2}, {4}};
  const std::vector<IndexPair> translation{{1, 3}, {1, 2}, {3, 2}, {2, 4}, {4, 2}};
  EXPECT_EQ(residual_constraints(translation, orbits), (std::vector<IndexPair>{{1, 2}, {2, 4}}));
}

TEST(SymmetryTest, SiteMapsCommuteWithCanonicalization) {
  std::mt19937_64 rng(9);
  const int n = 7;
  const auto geometry = Geometry::chain(n);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Site> sites{1, 2, 3, 4, 5, 6, 7};
    std::shuffle(sites.begin(), sites.end(), rng);
    std::vector<Pair> pairs{{sites[0], sites[1]}, {sites[2], sites[3]}};
    const Triple triple{sites[4], sites[5], sites[6]};
    const auto canon = Monomial::canonicalize(pairs, triple);
    for (const auto& map : {geometry.point_group.front(), geometry.translations.front()}) {
      auto image = [&](Site s) { return map[static_cast<std::size_t>(s - 1)]; };
      const auto mapped = apply_site_map(canon.monomial, map);
      bool leaves = false;
      for (Site s : sites) leaves = leaves || image(s) == 0;
      if (leaves) {
        EXPECT_FALSE(mapped);
        continue;
      }
      // Map the raw, unsorted input first and canonicalize afterwards.
      std::vector<Pair> raw_pairs;
      for (const auto& p : pairs) raw_pairs.push_back({image(p.first), image(p.second)});
      const auto direct =
          Monomial::canonicalize(raw_pairs, Triple{image(triple[0]), image(triple[1]), image(triple[2])});
      ASSERT_TRUE(mapped);
      EXPECT_EQ(mapped->monomial, direct.monomial);
      EXPECT_EQ(mapped->sign * canon.sign, direct.sign);
    }
  }
}

TEST(SymmetryTest, MirrorOrbitsForceMirrorSymmetricDensity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    const auto tensor = build_structure_tensor(n, RelationTable::standard());
    const auto geometry = Geometry::chain(n);
    const auto cs = ConstraintSet::build(geometry, tensor.basis());
    std::vector<std::size_t> mirror(tensor.size());
    for (std::size_t k = 0; k < tensor.size(); ++k) {
      mirror[k] = tensor.index_of(apply_site_map(tensor.basis()[k], geometry.point_group.front())->monomial);
    }
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd b(static_cast<Eigen::Index>(tensor.size()));
      for (const auto& orbit : cs.b_orbits) {
        const double v = draw(rng);
        for (auto k : orbit) b(static_cast<Eigen::Index>(k)) = v;
      }
      const Eigen::VectorXd a = tensor.density_coefficients(b);
      for (std::size_t k = 0; k < tensor.size(); ++k) {
        ASSERT_NEAR(a(static_cast<Eigen::Index>(k)), a(static_cast<Eigen::Index>(mirror[k])), 1e-10)
            << "n=" << n << " " << tensor.basis()[k].to_string();
      }
    }
  }
}

TEST(SymmetryTest, MixedSectorOrbitsRejected) {
  // The mirror flips the sign of [1,2,3], so orbits of signed elements are refused.
  EXPECT_THROW(mirror_identification(Geometry::chain(3), enumerate_basis(3, Sector::kAB)),
               std::invalid_argument);
  const auto image = apply_site_map(Monomial::of({}, Triple{1, 2, 3}), Geometry::chain(3).point_group[0]);
  ASSERT_TRUE(image);
  EXPECT_EQ(image->sign, -1);
}

TEST(SymmetryTest, JsonRoundTripAndOrbitLookup) {
  const auto basis = enumerate_basis(5, Sector::kA);
  const auto cs = ConstraintSet::build(Geometry::chain(5), basis);
  const auto back = ConstraintSet::from_json(nlohmann::json::parse(cs.to_json().dump()));
  EXPECT_EQ(back.a_equalities, cs.a_equalities);
  EXPECT_EQ(back.b_orbits, cs.b_orbits);
  EXPECT_EQ(back.residual, cs.residual);
  const auto orbit = cs.orbit_of(basis.size());
  for (std::size_t o = 0; o < cs.b_orbits.size(); ++o) {
    for (auto k : cs.b_orbits[o]) EXPECT_EQ(orbit[k], o);
  }
  EXPECT_THROW(cs.orbit_of(basis.size() + 1), std::invalid_argument);
}
