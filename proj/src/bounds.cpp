#include "spinlb/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include "spinlb/lbfgs.hpp"

namespace spinlb {

ClusterModel ClusterModel::chain(int n) {
  if (n < 2) throw std::invalid_argument("a chain cluster needs at least two sites");
  ClusterModel model;
  model.n = n;
  for (Site s = 1; s < n; ++s) {
    model.bonds.push_back({s, s + 1});
    model.hamiltonian_coeffs.push_back(1.0);
  }
  return model;
}

OperatorPoly ClusterModel::hamiltonian() const {
  OperatorPoly h(n);
  for (std::size_t k = 0; k < bonds.size(); ++k) {
    h.add(Monomial::of({bonds[k]}), hamiltonian_coeffs.at(k));
  }
  return h;
}

double anderson_bound(const ClusterModel& model, int cap) {
  return min_eigenvalue(represent(model.hamiltonian(), model.n, cap)) * model.per_spin_factor();
}

namespace {

void check_sizes(const StructureTensor& tensor, const ClusterModel& model) {
  if (tensor.site_count() != model.n) {
    throw std::invalid_argument("structure tensor and cluster model disagree on the site count");
  }
}

/// Per-spin energy operator as a quadratic form in the full b:
/// tr(H tau^2) / (2^n (n-1)) = b^T E b, using tr((s_i s_j) A_k) = 3 2^n delta.
Eigen::SparseMatrix<double> energy_form(const StructureTensor& tensor, const ClusterModel& model) {
  const auto dim = static_cast<Eigen::Index>(tensor.size());
  Eigen::SparseMatrix<double> e(dim, dim);
  for (std::size_t k = 0; k < model.bonds.size(); ++k) {
    const auto idx = tensor.index_of(Monomial::of({model.bonds[k]}));
    e += (3.0 * model.hamiltonian_coeffs.at(k) * model.per_spin_factor()) * tensor.matrix(idx);
  }
  return e;
}

bool degenerate(double norm, double scale) { return !(norm > 1e-14 * scale); }

}  // namespace

ObjectiveValue objective(const Eigen::VectorXd& b, const StructureTensor& tensor,
                         const ClusterModel& model) {
  check_sizes(tensor, model);
  if (static_cast<std::size_t>(b.size()) != tensor.size()) {
    throw std::invalid_argument("coefficient vector has the wrong length");
  }
  const Eigen::SparseMatrix<double> c0 = tensor.matrix(0);
  const Eigen::VectorXd c0b = c0 * b;
  const double norm = b.dot(c0b);
  if (degenerate(norm, b.squaredNorm())) throw DegeneratePoint("tr tau^2 vanishes");
  const Eigen::VectorXd eb = energy_form(tensor, model) * b;
  ObjectiveValue out;
  out.value = b.dot(eb) / norm;
  out.gradient = 2.0 * (eb - out.value * c0b) / norm;
  return out;
}

DenseOperator density_matrix(const Eigen::VectorXd& a, const StructureTensor& tensor, int cap) {
  const int n = tensor.site_count();
  OperatorPoly rho(n);
  const double scale = std::ldexp(1.0, -n);
  for (std::size_t k = 0; k < tensor.size(); ++k) {
    rho.add(tensor.basis()[k], scale * a(static_cast<Eigen::Index>(k)));
  }
  return represent(rho, n, cap);
}

nlohmann::json OptimizerConfig::to_json() const {
  return {{"restarts", restarts},         {"seed", seed},
          {"feas_tol", feas_tol},         {"penalty_init", penalty_init},
          {"penalty_growth", penalty_growth}, {"max_outer", max_outer},
          {"max_inner", max_inner},       {"grad_tol", grad_tol},
          {"threads", threads}};
}

OptimizerConfig OptimizerConfig::from_json(const nlohmann::json& doc) {
  static const std::set<std::string> known{"restarts",  "seed",      "feas_tol",
                                           "penalty_init", "penalty_growth", "max_outer",
                                           "max_inner", "grad_tol",  "threads"};
  if (!doc.is_object()) throw std::invalid_argument("optimizer config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown optimizer config key: " + key);
  }
  OptimizerConfig c;
  c.restarts = doc.value("restarts", c.restarts);
  c.seed = doc.value("seed", c.seed);
  c.feas_tol = doc.value("feas_tol", c.feas_tol);
  c.penalty_init = doc.value("penalty_init", c.penalty_init);
  c.penalty_growth = doc.value("penalty_growth", c.penalty_growth);
  c.max_outer = doc.value("max_outer", c.max_outer);
  c.max_inner = doc.value("max_inner", c.max_inner);
  c.grad_tol = doc.value("grad_tol", c.grad_tol);
  c.threads = doc.value("threads", c.threads);
  if (c.restarts < 1 || c.max_outer < 1 || c.max_inner < 1 || c.threads < 0 ||
      !(c.feas_tol > 0.0) || !(c.penalty_init > 0.0) || !(c.penalty_growth >= 1.0) ||
      !(c.grad_tol > 0.0)) {
    throw std::invalid_argument("optimizer config value out of range");
  }
  return c;
}

ReducedProblem::ReducedProblem(const StructureTensor& tensor, const ClusterModel& model,
                               const ConstraintSet& constraints) {
  check_sizes(tensor, model);
  const auto dim = static_cast<Eigen::Index>(tensor.size());
  const auto orbit_count = static_cast<Eigen::Index>(constraints.b_orbits.size());
  Eigen::SparseMatrix<double> p(dim, orbit_count);
  for (Eigen::Index o = 0; o < orbit_count; ++o) {
    for (std::size_t k : constraints.b_orbits[static_cast<std::size_t>(o)]) {
      p.insert(static_cast<Eigen::Index>(k), o) = 1.0;
    }
  }
  auto reduce = [&](const Eigen::SparseMatrix<double>& m) -> Eigen::MatrixXd {
    return Eigen::MatrixXd(Eigen::SparseMatrix<double>(p.transpose()) * m * p);
  };
  norm_ = reduce(tensor.matrix(0));
  energy_ = reduce(energy_form(tensor, model));
  for (const auto& [k, k2] : constraints.residual) {
    residual_.push_back(reduce(tensor.matrix(k)) - reduce(tensor.matrix(k2)));
  }
  expand_ = p;
}

Eigen::VectorXd ReducedProblem::expand(const Eigen::VectorXd& b) const { return expand_ * b; }

double ReducedProblem::norm_value(const Eigen::VectorXd& b) const {
  const double norm = b.dot(norm_ * b);
  if (degenerate(norm, b.squaredNorm())) throw DegeneratePoint("tr tau^2 vanishes");
  return norm;
}

double ReducedProblem::energy(const Eigen::VectorXd& b, Eigen::VectorXd* gradient) const {
  const Eigen::VectorXd nb = norm_ * b;
  const double norm = b.dot(nb);
  if (degenerate(norm, b.squaredNorm())) throw DegeneratePoint("tr tau^2 vanishes");
  const Eigen::VectorXd eb = energy_ * b;
  const double value = b.dot(eb) / norm;
  if (gradient) *gradient = 2.0 * (eb - value * nb) / norm;
  return value;
}

Eigen::VectorXd ReducedProblem::constraints(const Eigen::VectorXd& b, Eigen::MatrixXd* jacobian) const {
  const double norm = norm_value(b);
  const auto m = static_cast<Eigen::Index>(residual_.size());
  Eigen::VectorXd g(m);
  Eigen::VectorXd nb;
  if (jacobian) {
    jacobian->resize(b.size(), m);
    nb = norm_ * b;
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::VectorXd rb = residual_[static_cast<std::size_t>(r)] * b;
    g(r) = b.dot(rb) / norm;
    if (jacobian) jacobian->col(r) = 2.0 * (rb - g(r) * nb) / norm;
  }
  return g;
}

namespace {

struct RestartResult {
  RestartOutcome outcome;
  Eigen::VectorXd b;
};

RestartResult run_restart(const ReducedProblem& problem, const OptimizerConfig& config, int index) {
  std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(index));
  std::uniform_real_distribution<double> draw(-0.5, 0.5);
  Eigen::VectorXd b(problem.size());
  b(0) = 1.0;
  for (Eigen::Index k = 1; k < b.size(); ++k) b(k) = draw(rng);

  RestartResult result;
  const auto m = static_cast<Eigen::Index>(problem.constraint_count());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  double mu = config.penalty_init;
  double previous = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  LbfgsOptions options;
  options.max_iterations = config.max_inner;
  options.grad_tol = config.grad_tol;

  try {
    for (int outer = 0; outer < config.max_outer; ++outer) {
      auto lagrangian = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        Eigen::VectorXd gf;
        double value = problem.energy(x, &gf);
        if (m > 0) {
          Eigen::MatrixXd jac;
          const Eigen::VectorXd g = problem.constraints(x, &jac);
          value += lambda.dot(g) + 0.5 * mu * g.squaredNorm();
          gf += jac * (lambda + mu * g);
        }
        grad = std::move(gf);
        return value;
      };
      const auto inner = minimize_lbfgs(lagrangian, b, options);
      b = inner.x / inner.x.norm();
      const Eigen::VectorXd g = problem.constraints(b, nullptr);
      residual = m > 0 ? g.lpNorm<Eigen::Infinity>() : 0.0;
      result.outcome.outer_iterations = outer + 1;
      if (residual < config.feas_tol && inner.converged) break;
      lambda += mu * g;
      if (residual > 0.25 * previous) mu *= config.penalty_growth;
      previous = residual;
    }
    result.outcome.value = problem.energy(b, nullptr);
    result.outcome.residual = residual;
    result.outcome.feasible = residual < config.feas_tol;
  } catch (const DegeneratePoint&) {
    result.outcome.degenerate = true;
    result.outcome.value = std::numeric_limits<double>::quiet_NaN();
    result.outcome.residual = std::numeric_limits<double>::infinity();
  }
  result.b = std::move(b);
  return result;
}

constexpr double kBasinWidth = 1e-5;

}  // namespace

BoundReport variational_bound(const ClusterModel& model, const StructureTensor& tensor,
                              const ConstraintSet& constraints, const OptimizerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const ReducedProblem problem(tensor, model, constraints);

  std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < config.restarts; k = next++) {
      results[static_cast<std::size_t>(k)] = run_restart(problem, config, k);
    }
  };
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BoundReport report;
  report.cluster_size = model.n;
  report.anderson_per_spin = anderson_bound(model);
  report.optimizer_restarts_used = config.restarts;

  // Best feasible restart; if none is feasible, the one closest to feasible.
  std::size_t best = results.size();
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& o = results[k].outcome;
    if (o.degenerate) continue;
    if (o.feasible) ++report.feasible_restarts;
    if (best == results.size()) {
      best = k;
      continue;
    }
    const auto& cur = results[best].outcome;
    const bool better = o.feasible != cur.feasible ? o.feasible
                        : o.feasible               ? o.value < cur.value
                                                   : o.residual < cur.residual;
    if (better) best = k;
  }
  if (best == results.size()) {
    report.status = BoundStatus::kInfeasible;
    report.variational_per_spin = std::numeric_limits<double>::quiet_NaN();
    report.best_constraint_residual = std::numeric_limits<double>::infinity();
  } else {
    const auto& o = results[best].outcome;
    report.status = o.feasible ? BoundStatus::kFeasible : BoundStatus::kInfeasible;
    report.variational_per_spin = o.value;
    report.best_constraint_residual = o.residual;
    report.best_a = tensor.density_coefficients(problem.expand(results[best].b));
    report.spread_min = report.spread_max = o.value;
    for (const auto& r : results) {
      if (!r.outcome.feasible) continue;
      report.spread_min = std::min(report.spread_min, r.outcome.value);
      report.spread_max = std::max(report.spread_max, r.outcome.value);
      if (r.outcome.value <= o.value + kBasinWidth) ++report.best_basin_hits;
    }
  }
  report.low_basin_hits = report.best_basin_hits < 3;
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool sandwich_check(const BoundReport& report) {
  constexpr double slack = 1e-9;
  return report.status == BoundStatus::kFeasible &&
         report.anderson_per_spin <= report.variational_per_spin + slack &&
         report.variational_per_spin <= report.bethe_reference + slack;
}

nlohmann::json BoundReport::to_json(bool with_timing) const {
  nlohmann::json doc{{"cluster_size", cluster_size},
                     {"anderson_per_spin", anderson_per_spin},
                     {"variational_per_spin", variational_per_spin},
                     {"bethe_reference", bethe_reference},
                     {"status", status == BoundStatus::kFeasible ? "feasible" : "infeasible"},
                     {"sandwich", sandwich_check(*this)},
                     {"optimizer_restarts_used", optimizer_restarts_used},
                     {"feasible_restarts", feasible_restarts},
                     {"best_basin_hits", best_basin_hits},
                     {"low_basin_hits", low_basin_hits},
                     {"spread", {spread_min, spread_max}},
                     {"best_constraint_residual", best_constraint_residual},
                     {"best_a", std::vector<double>(best_a.data(), best_a.data() + best_a.size())}};
  if (with_timing) doc["wall_time"] = wall_time;
  return doc;
}

std::string format_significant(double value, int digits) {
  if (!std::isfinite(value)) return value != value ? "nan" : (value > 0 ? "inf" : "-inf");
  const int magnitude = value == 0.0 ? 0 : static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = std::max(0, digits - 1 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string format_table(const std::vector<BoundReport>& reports) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof line, "%-14s %-16s %-18s %s\n", "cluster size", "Anderson bound",
                "variational bound", "status");
  out += line;
  for (const auto& r : reports) {
    const char* status = r.status != BoundStatus::kFeasible ? "FAILED"
                         : !sandwich_check(r)              ? "SANDWICH VIOLATED"
                         : r.low_basin_hits                ? "ok (few basin hits)"
                                                           : "ok";
    std::snprintf(line, sizeof line, "%-14d %-16s %-18s %s\n", r.cluster_size,
                  format_significant(r.anderson_per_spin).c_str(),
                  format_significant(r.variational_per_spin).c_str(), status);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-14s %-16s %s\n", "Bethe ansatz", "",
                format_significant(kBetheReference).c_str());
  out += line;
  return out;
}

}  // namespace spinlb
