#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "spinlb/oracle.hpp"
#include "spinlb/structure_tensor.hpp"
#include "spinlb/symmetry.hpp"

namespace spinlb {

/// Exact ground-state energy per spin of the infinite Heisenberg chain.
inline const double kBetheReference = 1.0 - 4.0 * std::log(2.0);

/// Raised when tr tau^2 vanishes and the energy ratio is undefined.
class DegeneratePoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Open chain cluster with nearest-neighbour bonds. A chain of N spins and N
/// bonds splits into N/(n-1) bond-disjoint clusters, so energies per spin
/// carry the factor 1/(n-1).
struct ClusterModel {
  int n = 0;
  std::vector<Pair> bonds;
  std::vector<double> hamiltonian_coeffs;

  static ClusterModel chain(int n);

  OperatorPoly hamiltonian() const;
  double per_spin_factor() const { return 1.0 / static_cast<double>(n - 1); }
};

/// Smallest eigenvalue of the cluster Hamiltonian per spin.
double anderson_bound(const ClusterModel& model, int cap = kDenseSiteCap);

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/// Per-spin energy tr(H tau^2) / (tr(tau^2) (n-1)) for tau = sum_k b_k A_k
/// over the full A-sector basis, with its gradient in b.
ObjectiveValue objective(const Eigen::VectorXd& b, const StructureTensor& tensor,
                         const ClusterModel& model);

/// Dense rho = 2^-n sum_k a_k A_k for a coefficient vector with a_0 = 1.
DenseOperator density_matrix(const Eigen::VectorXd& a, const StructureTensor& tensor,
                             int cap = kDenseSiteCap);

struct OptimizerConfig {
  int restarts = 64;
  std::uint64_t seed = 20240601;
  double feas_tol = 1e-8;
  double penalty_init = 10.0;
  double penalty_growth = 5.0;
  int max_outer = 30;
  int max_inner = 500;
  double grad_tol = 1e-9;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static OptimizerConfig from_json(const nlohmann::json& doc);
};

/// Energy ratio and residual constraints in mirror-orbit coordinates: the
/// full coefficient vector is b_full = P b with P the orbit indicator.
class ReducedProblem {
 public:
  ReducedProblem(const StructureTensor& tensor, const ClusterModel& model,
                 const ConstraintSet& constraints);

  Eigen::Index size() const { return norm_.rows(); }
  std::size_t constraint_count() const { return residual_.size(); }

  Eigen::VectorXd expand(const Eigen::VectorXd& b) const;

  /// Per-spin energy and gradient.
  double energy(const Eigen::VectorXd& b, Eigen::VectorXd* gradient) const;

  /// g_r = (a_k - a_k') / a_0 for each residual equality; gradients are
  /// written as columns of `jacobian` when it is non-null.
  Eigen::VectorXd constraints(const Eigen::VectorXd& b, Eigen::MatrixXd* jacobian) const;

 private:
  double norm_value(const Eigen::VectorXd& b) const;

  Eigen::SparseMatrix<double> expand_;
  Eigen::MatrixXd norm_;
  Eigen::MatrixXd energy_;
  std::vector<Eigen::MatrixXd> residual_;
};

enum class BoundStatus { kFeasible, kInfeasible };

struct RestartOutcome {
  double value = 0.0;
  double residual = 0.0;
  bool feasible = false;
  bool degenerate = false;
  int outer_iterations = 0;
};

struct BoundReport {
  int cluster_size = 0;
  double anderson_per_spin = 0.0;
  double variational_per_spin = 0.0;
  double bethe_reference = kBetheReference;
  BoundStatus status = BoundStatus::kInfeasible;
  int optimizer_restarts_used = 0;
  int feasible_restarts = 0;
  int best_basin_hits = 0;
  bool low_basin_hits = true;
  double spread_min = 0.0;
  double spread_max = 0.0;
  double best_constraint_residual = 0.0;
  double wall_time = 0.0;
  /// Density coefficients of the best state, a_0 = 1.
  Eigen::VectorXd best_a;

  /// Timing is left out unless requested so reports compare byte-for-byte.
  nlohmann::json to_json(bool with_timing = false) const;
};

/// Minimizes the per-spin energy under the residual translation equalities
/// with an augmented Lagrangian (L-BFGS inner solves) from
/// `config.restarts` seeded random starts.
BoundReport variational_bound(const ClusterModel& model, const StructureTensor& tensor,
                              const ConstraintSet& constraints, const OptimizerConfig& config);

/// anderson <= variational <= Bethe reference, each with 1e-9 slack.
bool sandwich_check(const BoundReport& report);

/// Aligned text table with one row per report and a closing reference row.
std::string format_table(const std::vector<BoundReport>& reports);

/// Value printed with five significant digits.
std::string format_significant(double value, int digits = 5);

}  // namespace spinlb
