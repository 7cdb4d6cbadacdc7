#include "spinlb/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "spinlb/bounds.hpp"
#include "spinlb/dependencies.hpp"
#include "spinlb/oracle.hpp"
#include "spinlb/structure_tensor.hpp"

namespace spinlb {

namespace {

constexpr double kDenseTol = 1e-10;

/// Factor written over local labels as a monomial with its ordering sign.
Monomial::Canonical factor_monomial(const std::vector<int>& labels) {
  if (labels.size() == 2) return Monomial::canonicalize({{labels[0], labels[1]}});
  return Monomial::canonicalize({}, Triple{labels[0], labels[1], labels[2]});
}

OperatorPoly stated_rhs(const Relation& relation, int n) {
  OperatorPoly out(n);
  for (const auto& term : relation.rhs) {
    std::vector<Pair> pairs;
    for (const auto& p : term.pairs) pairs.push_back({p[0], p[1]});
    std::optional<Triple> triple;
    if (term.triple) triple = Triple{(*term.triple)[0], (*term.triple)[1], (*term.triple)[2]};
    const auto c = Monomial::canonicalize(std::move(pairs), triple);
    out.add(c.monomial, term.coeff * static_cast<double>(c.sign));
  }
  return out;
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

double max_entry(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::VectorXd random_b(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> draw(-1.0, 1.0);
  Eigen::VectorXd b(static_cast<Eigen::Index>(size));
  for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = draw(rng);
  return b;
}

CheckResult result(std::string name, bool passed, std::string detail = {}) {
  return {std::move(name), passed, std::move(detail)};
}

}  // namespace

CheckResult check_relation(const Relation& relation, const RelationTable& rules) {
  constexpr int n = 6;
  const std::string name = "relation " + relation.name;
  const auto left = factor_monomial(relation.left);
  const auto right = factor_monomial(relation.right);
  const double sign = left.sign * right.sign;

  OperatorPoly product = multiply(left.monomial, right.monomial, n, rules);
  product *= sign;
  const OperatorPoly stated = stated_rhs(relation, n);
  const double symbolic_gap = (product - stated).max_abs_coeff();

  const Eigen::MatrixXcd dense =
      sign * (represent(left.monomial, n).matrix() * represent(right.monomial, n).matrix());
  const double product_gap = max_entry(represent(product, n).matrix() - dense);
  const double stated_gap = max_entry(represent(stated, n).matrix() - dense);

  std::ostringstream detail;
  detail << "symbolic vs stated " << symbolic_gap << ", symbolic vs dense " << product_gap
         << ", stated vs dense " << stated_gap;
  return result(name, symbolic_gap == 0.0 && product_gap < kDenseTol && stated_gap < kDenseTol,
                detail.str());
}

CheckResult check_dense_products(int n, const RelationTable& rules) {
  const std::string name = "dense products n=" + std::to_string(n);
  const auto basis = enumerate_basis(n, Sector::kAB);
  std::vector<Eigen::MatrixXcd> dense;
  for (const auto& m : basis) dense.push_back(represent(m, n).matrix());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Eigen::MatrixXcd expected = dense[i] * dense[j];
      const double gap = max_entry(represent(multiply(basis[i], basis[j], n, rules), n).matrix() - expected);
      if (!(gap < kDenseTol)) {
        return result(name, false, basis[i].to_string() + " * " + basis[j].to_string() +
                                       " differs by " + num(gap));
      }
    }
  }
  return result(name, true, std::to_string(basis.size() * basis.size()) + " products");
}

CheckResult check_gram_example(const RelationTable& rules) {
  const std::vector<Monomial> xyz{Monomial::of({{1, 2}, {3, 4}}), Monomial::of({{1, 3}, {2, 4}}),
                                  Monomial::of({{1, 4}, {2, 3}})};
  const Eigen::MatrixXd g = gram_matrix(xyz, 4, rules);
  Eigen::MatrixXd expected(3, 3);
  expected << 9, 3, 3, 3, 9, 3, 3, 3, 9;
  std::ostringstream detail;
  detail << "g = [" << g.row(0) << "; " << g.row(1) << "; " << g.row(2) << "]";
  return result("Gram example n=4", g == expected, detail.str());
}

CheckResult check_counts(int n_max) {
  for (int n = 1; n <= n_max; ++n) {
    const auto enumerated = enumerate_basis(n, Sector::kA).size();
    if (enumerated != a_sector_count(n)) {
      return result("A-sector counts", false, "mismatch at n=" + std::to_string(n));
    }
  }
  return result("A-sector counts", true,
                "n<=" + std::to_string(n_max) + ", K(" + std::to_string(n_max) +
                    ") without identity = " + std::to_string(a_sector_count(n_max) - 1));
}

CheckResult check_structure_tensor(int n, const RelationTable& rules) {
  const std::string name = "structure tensor n=" + std::to_string(n);
  try {
    const auto tensor = build_structure_tensor(n, rules);
    const auto& basis = tensor.basis();
    std::vector<Eigen::MatrixXcd> dense;
    for (const auto& m : basis) dense.push_back(represent(m, n).matrix());
    std::vector<Eigen::SparseMatrix<double>> c;
    for (std::size_t k = 0; k < basis.size(); ++k) c.push_back(tensor.matrix(k));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        Eigen::MatrixXcd expected = 0.5 * (dense[i] * dense[j] + dense[j] * dense[i]);
        for (std::size_t k = 0; k < basis.size(); ++k) {
          expected -= c[k].coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * dense[k];
        }
        if (!(max_entry(expected) < kDenseTol)) {
          return result(name, false, "anticommutator of " + basis[i].to_string() + " and " +
                                         basis[j].to_string() + " disagrees with dense");
        }
      }
    }
    return result(name, true);
  } catch (const std::exception& e) {
    return result(name, false, e.what());
  }
}

CheckResult check_dependencies_at(int n, const RelationTable& rules) {
  const auto report = check_dependencies(n, kDependencySiteCap, rules);
  std::ostringstream detail;
  detail << "|A+B|=" << report.set_size << " gram rank " << report.gram_rank << ", predicted "
         << report.predicted_rank << (report.ill_conditioned ? " (ill-conditioned)" : "");
  return result("dependencies n=" + std::to_string(n), report.verified, detail.str());
}

CheckResult check_gradient(int n, int points, std::uint64_t seed) {
  const std::string name = "objective gradient n=" + std::to_string(n);
  const auto tensor = build_structure_tensor(n, RelationTable::standard());
  const auto model = ClusterModel::chain(n);
  std::mt19937_64 rng(seed);
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    const Eigen::VectorXd b = random_b(tensor.size(), rng);
    const auto analytic = objective(b, tensor, model).gradient;
    Eigen::VectorXd numeric(b.size());
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      Eigen::VectorXd up = b, down = b;
      up(k) += h;
      down(k) -= h;
      numeric(k) = (objective(up, tensor, model).value - objective(down, tensor, model).value) / (2 * h);
    }
    worst = std::max(worst, (analytic - numeric).norm() / std::max(analytic.norm(), 1e-300));
  }
  return result(name, worst < 1e-6, "max relative error " + num(worst));
}

CheckResult check_positivity_and_scale(int n, int draws, std::uint64_t seed) {
  const std::string name = "positivity and scale invariance n=" + std::to_string(n);
  const auto tensor = build_structure_tensor(n, RelationTable::standard());
  const auto model = ClusterModel::chain(n);
  std::mt19937_64 rng(seed);
  double worst_scale = 0.0;
  for (int d = 0; d < draws; ++d) {
    const Eigen::VectorXd b = random_b(tensor.size(), rng);
    const auto rho = density_matrix(tensor.density_coefficients(b), tensor);
    if (!spectrum_positivity(rho)) {
      return result(name, false, "negative eigenvalue " + num(min_eigenvalue(rho)));
    }
    const double base = objective(b, tensor, model).value;
    for (double c : {-1.0, 0.01, 100.0}) {
      worst_scale = std::max(worst_scale, std::abs(objective(c * b, tensor, model).value - base));
    }
  }
  return result(name, worst_scale < 1e-10, "max scale deviation " + num(worst_scale));
}

CheckResult check_dense_objective(int n, int draws, std::uint64_t seed) {
  const std::string name = "objective vs dense n=" + std::to_string(n);
  const auto tensor = build_structure_tensor(n, RelationTable::standard());
  const auto model = ClusterModel::chain(n);
  const Eigen::MatrixXcd h = represent(model.hamiltonian(), n).matrix();
  std::vector<Eigen::MatrixXcd> dense;
  for (const auto& m : tensor.basis()) dense.push_back(represent(m, n).matrix());
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    const Eigen::VectorXd b = random_b(tensor.size(), rng);
    Eigen::MatrixXcd tau = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
    for (std::size_t k = 0; k < dense.size(); ++k) tau += b(static_cast<Eigen::Index>(k)) * dense[k];
    const Eigen::MatrixXcd tau2 = tau * tau;
    const double expected = (h * tau2).trace().real() / (tau2.trace().real() * (n - 1));
    worst = std::max(worst, std::abs(objective(b, tensor, model).value - expected));
  }
  return result(name, worst < 1e-9, "max deviation " + num(worst));
}

std::vector<CheckResult> run_verification(VerifyLevel level, const RelationTable& rules) {
  std::vector<CheckResult> out;
  for (const auto& relation : rules.all()) out.push_back(check_relation(relation, rules));
  out.push_back(check_gram_example(rules));
  out.push_back(check_counts(10));
  for (int n = 1; n <= 4; ++n) out.push_back(check_dense_products(n, rules));
  if (level == VerifyLevel::kQuick) return out;

  for (int n = 5; n <= 6; ++n) out.push_back(check_dense_products(n, rules));
  for (int n = 2; n <= 5; ++n) out.push_back(check_structure_tensor(n, rules));
  for (int n = 4; n <= 8; ++n) out.push_back(check_dependencies_at(n, rules));
  for (int n = 4; n <= 5; ++n) out.push_back(check_gradient(n, 20, 1000 + static_cast<std::uint64_t>(n)));
  for (int n = 2; n <= 6; ++n) {
    out.push_back(check_positivity_and_scale(n, 100, 2000 + static_cast<std::uint64_t>(n)));
    out.push_back(check_dense_objective(n, 100, 3000 + static_cast<std::uint64_t>(n)));
  }
  return out;
}

}  // namespace spinlb
