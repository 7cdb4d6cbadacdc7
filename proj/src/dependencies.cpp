#include "spinlb/dependencies.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spinlb {

namespace {

/// Every A-sector monomial on `sites` (including the identity).
std::vector<Monomial> a_monomials_on(const std::vector<Site>& sites) {
  std::vector<Monomial> out;
  std::vector<Pair> current;
  std::vector<bool> used(sites.size(), false);
  auto recurse = [&](auto&& self, std::size_t pos) -> void {
    while (pos < sites.size() && used[pos]) ++pos;
    if (pos == sites.size()) {
      out.push_back(Monomial::canonicalize(current).monomial);
      return;
    }
    used[pos] = true;
    self(self, pos + 1);
    for (std::size_t k = pos + 1; k < sites.size(); ++k) {
      if (used[k]) continue;
      used[k] = true;
      current.push_back({sites[pos], sites[k]});
      self(self, pos + 1);
      current.pop_back();
      used[k] = false;
    }
    used[pos] = false;
  };
  recurse(recurse, 0);
  return out;
}

std::vector<Site> complement(int n, const std::vector<Site>& taken) {
  std::vector<Site> rest;
  for (Site s = 1; s <= n; ++s) {
    if (std::find(taken.begin(), taken.end(), s) == taken.end()) rest.push_back(s);
  }
  return rest;
}

/// Visits every k-subset of {1..n} in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k > n) return;
  std::vector<Site> sub(static_cast<std::size_t>(k));
  std::iota(sub.begin(), sub.end(), 1);
  while (true) {
    fn(sub);
    int pos = k - 1;
    while (pos >= 0 && sub[static_cast<std::size_t>(pos)] == n - k + pos + 1) --pos;
    if (pos < 0) return;
    ++sub[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q) {
      sub[static_cast<std::size_t>(q)] = sub[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
}

/// poly * m for m an A-sector monomial disjoint from every term of poly.
OperatorPoly times_disjoint(const OperatorPoly& poly, const Monomial& m, int n) {
  OperatorPoly out(n);
  for (const auto& [term, c] : poly.terms()) {
    std::vector<Pair> pairs = term.pairs();
    pairs.insert(pairs.end(), m.pairs().begin(), m.pairs().end());
    auto canon = Monomial::canonicalize(std::move(pairs), term.triple());
    out.add(canon.monomial, c * static_cast<double>(canon.sign));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd gram_matrix(const std::vector<Monomial>& elements, int n, const RelationTable& rules) {
  const auto size = static_cast<Eigen::Index>(elements.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
  const double dim = std::ldexp(1.0, n);

  // Only elements with identical support have non-zero overlap.
  std::map<std::uint64_t, std::vector<Eigen::Index>> by_support;
  for (Eigen::Index a = 0; a < size; ++a) {
    by_support[elements[static_cast<std::size_t>(a)].support_mask()].push_back(a);
  }
  for (const auto& [mask, group] : by_support) {
    for (std::size_t p = 0; p < group.size(); ++p) {
      for (std::size_t q = p; q < group.size(); ++q) {
        const auto a = group[p];
        const auto b = group[q];
        const double v = trace_inner(elements[static_cast<std::size_t>(a)],
                                     elements[static_cast<std::size_t>(b)], n, rules) / dim;
        g(a, b) = v;
        g(b, a) = v;
      }
    }
  }
  return g;
}

std::vector<OperatorPoly> five_term_instances(int n) {
  std::vector<OperatorPoly> out;
  for_each_subset(n, 5, [&](const std::vector<Site>& sub) {
    const auto others_all = complement(n, sub);
    const auto spectators = a_monomials_on(others_all);
    for (std::size_t lead = 0; lead < sub.size(); ++lead) {
      std::vector<Site> rest;
      for (std::size_t k = 0; k < sub.size(); ++k) {
        if (k != lead) rest.push_back(sub[k]);
      }
      OperatorPoly identity(n);
      for (std::size_t k = 0; k < 4; ++k) {
        std::vector<Site> tri;
        for (std::size_t q = 0; q < 4; ++q) {
          if (q != k) tri.push_back(rest[q]);
        }
        auto canon = Monomial::canonicalize({{sub[lead], rest[k]}}, Triple{tri[0], tri[1], tri[2]});
        const double sign = (k % 2 == 0 ? 1.0 : -1.0) * canon.sign;
        identity.add(canon.monomial, sign);
      }
      for (const auto& m : spectators) out.push_back(times_disjoint(identity, m, n));
    }
  });
  return out;
}

std::vector<OperatorPoly> determinant_instances(int n) {
  std::vector<OperatorPoly> out;
  for_each_subset(n, 8, [&](const std::vector<Site>& sub) {
    const auto spectators = a_monomials_on(complement(n, sub));
    // The determinant is invariant under exchanging rows and columns, so
    // the column set always holds the smallest site.
    for_each_subset(7, 3, [&](const std::vector<Site>& pick) {
      std::vector<Site> cols{sub[0]};
      for (Site p : pick) cols.push_back(sub[static_cast<std::size_t>(p)]);
      std::vector<Site> rows;
      for (Site s : sub) {
        if (std::find(cols.begin(), cols.end(), s) == cols.end()) rows.push_back(s);
      }
      OperatorPoly det(n);
      std::array<int, 4> perm{0, 1, 2, 3};
      do {
        int inversions = 0;
        for (int a = 0; a < 4; ++a) {
          for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b] ? 1 : 0;
        }
        std::vector<Pair> pairs;
        for (std::size_t r = 0; r < 4; ++r) {
          pairs.push_back({cols[static_cast<std::size_t>(perm[r])], rows[r]});
        }
        det.add(Monomial::canonicalize(std::move(pairs)).monomial, inversions % 2 == 0 ? 1.0 : -1.0);
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (const auto& m : spectators) out.push_back(times_disjoint(det, m, n));
    });
  });
  return out;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol, bool* ambiguous) {
  if (m.size() == 0) return 0;
  Eigen::VectorXd values;
  if (m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() == 0.0) {
    values = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
                 .eigenvalues()
                 .cwiseAbs();
  } else {
    const Eigen::MatrixXd tall = m.rows() >= m.cols() ? m : Eigen::MatrixXd(m.transpose());
    values = Eigen::JacobiSVD<Eigen::MatrixXd>(tall).singularValues();
  }
  const double largest = values.maxCoeff();
  if (largest == 0.0) return 0;
  Eigen::Index rank = 0;
  bool gray = false;
  for (double v : values) {
    const double rel = v / largest;
    if (rel > rel_tol) ++rank;
    if (rel > 1e-3 * rel_tol && rel < 1e3 * rel_tol) gray = true;
  }
  if (ambiguous) *ambiguous = gray;
  return rank;
}

DependencyReport check_dependencies(int n, int cap, const RelationTable& rules) {
  if (n > cap) {
    throw CapacityError("dependency check for n=" + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(cap));
  }
  const auto elements = enumerate_basis(n, Sector::kAB);
  std::map<Monomial, Eigen::Index> index;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    index.emplace(elements[k], static_cast<Eigen::Index>(k));
  }

  DependencyReport report;
  report.n = n;
  report.set_size = elements.size();

  bool gram_gray = false;
  report.gram_rank = numerical_rank(gram_matrix(elements, n, rules), 1e-9, &gram_gray);

  auto instances = five_term_instances(n);
  report.five_term_count = instances.size();
  auto dets = determinant_instances(n);
  report.determinant_count = dets.size();
  instances.insert(instances.end(), dets.begin(), dets.end());

  Eigen::MatrixXd relations = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(instances.size()),
                                                    static_cast<Eigen::Index>(elements.size()));
  for (std::size_t r = 0; r < instances.size(); ++r) {
    for (const auto& [m, c] : instances[r].terms()) {
      relations(static_cast<Eigen::Index>(r), index.at(m)) = c.real();
    }
  }
  bool relation_gray = false;
  const Eigen::Index relation_rank = numerical_rank(relations, 1e-9, &relation_gray);
  report.predicted_rank = static_cast<Eigen::Index>(elements.size()) - relation_rank;
  report.verified = report.gram_rank == report.predicted_rank;
  report.ill_conditioned = gram_gray || relation_gray;
  return report;
}

}  // namespace spinlb
