#pragma once

#include <functional>

#include <Eigen/Dense>

namespace spinlb {

/// Returns f(x) and writes the gradient into the second argument.
using GradientFunction = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsOptions {
  int max_iterations = 500;
  int memory = 10;
  /// Stop when the gradient infinity norm falls below this value.
  double grad_tol = 1e-9;
  /// Stop when an accepted step lowers f by less than this relative amount.
  double rel_f_tol = 1e-15;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Limited-memory BFGS with a strong Wolfe line search (bracketing and
/// cubic-interpolation zoom, c1 = 1e-4, c2 = 0.9).
LbfgsResult minimize_lbfgs(const GradientFunction& fn, Eigen::VectorXd x0,
                           const LbfgsOptions& options = {});

}  // namespace spinlb
