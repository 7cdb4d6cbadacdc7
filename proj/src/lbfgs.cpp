#include "spinlb/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace spinlb {

namespace {

constexpr double kC1 = 1e-4;
constexpr double kC2 = 0.9;
constexpr int kMaxLineSearchSteps = 40;

struct LinePoint {
  double t = 0.0;
  double f = 0.0;
  double d = 0.0;  // directional derivative
};

/// Minimizer of the cubic matching values and slopes at a and b, clamped to
/// the inner part of the interval; bisection when the cubic is unusable.
double cubic_step(const LinePoint& a, const LinePoint& b) {
  const double lo = std::min(a.t, b.t);
  const double hi = std::max(a.t, b.t);
  if (!std::isfinite(a.f) || !std::isfinite(b.f)) return 0.5 * (lo + hi);
  const double d1 = a.d + b.d - 3.0 * (a.f - b.f) / (a.t - b.t);
  const double disc = d1 * d1 - a.d * b.d;
  double t = 0.5 * (lo + hi);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b.t - a.t);
    const double denom = b.d - a.d + 2.0 * d2;
    if (denom != 0.0) {
      const double c = b.t - (b.t - a.t) * (b.d + d2 - d1) / denom;
      if (std::isfinite(c)) t = c;
    }
  }
  const double margin = 0.1 * (hi - lo);
  return std::clamp(t, lo + margin, hi - margin);
}

class LineSearch {
 public:
  LineSearch(const GradientFunction& fn, const Eigen::VectorXd& x, const Eigen::VectorXd& dir)
      : fn_(fn), x_(x), dir_(dir), grad_(x.size()) {}

  LinePoint eval(double t) {
    trial_ = x_ + t * dir_;
    const double f = fn_(trial_, grad_);
    return {t, f, grad_.dot(dir_)};
  }

  /// Returns false if no acceptable step was found.
  bool run(const LinePoint& start, double t_init) {
    LinePoint prev = start;
    double t = t_init;
    for (int k = 0; k < kMaxLineSearchSteps; ++k) {
      const LinePoint cur = eval(t);
      if (!std::isfinite(cur.f) || cur.f > start.f + kC1 * t * start.d || (k > 0 && cur.f >= prev.f)) {
        return zoom(start, prev, cur);
      }
      if (std::abs(cur.d) <= -kC2 * start.d) return accept(cur);
      if (cur.d >= 0.0) return zoom(start, cur, prev);
      prev = cur;
      t *= 2.0;
    }
    return false;
  }

  const Eigen::VectorXd& x() const { return best_x_; }
  const Eigen::VectorXd& gradient() const { return best_grad_; }
  double f() const { return best_f_; }

 private:
  bool accept(const LinePoint& p) {
    best_x_ = trial_;
    best_grad_ = grad_;
    best_f_ = p.f;
    return true;
  }

  bool zoom(const LinePoint& start, LinePoint lo, LinePoint hi) {
    for (int k = 0; k < kMaxLineSearchSteps; ++k) {
      const double t = cubic_step(lo, hi);
      const LinePoint cur = eval(t);
      if (!std::isfinite(cur.f) || cur.f > start.f + kC1 * t * start.d || cur.f >= lo.f) {
        hi = cur;
      } else {
        if (std::abs(cur.d) <= -kC2 * start.d) return accept(cur);
        if (cur.d * (hi.t - lo.t) >= 0.0) hi = lo;
        lo = cur;
      }
      if (std::abs(hi.t - lo.t) < 1e-16 * std::max(1.0, std::abs(lo.t))) break;
    }
    // Fall back to the best sufficient-decrease point seen.
    if (lo.t > 0.0 && lo.f < start.f) {
      eval(lo.t);
      return accept(lo);
    }
    return false;
  }

  const GradientFunction& fn_;
  const Eigen::VectorXd& x_;
  const Eigen::VectorXd& dir_;
  Eigen::VectorXd trial_;
  Eigen::VectorXd grad_;
  Eigen::VectorXd best_x_;
  Eigen::VectorXd best_grad_;
  double best_f_ = 0.0;
};

}  // namespace

LbfgsResult minimize_lbfgs(const GradientFunction& fn, Eigen::VectorXd x0, const LbfgsOptions& options) {
  LbfgsResult result;
  Eigen::VectorXd g(x0.size());
  double f = fn(x0, g);
  Eigen::VectorXd x = std::move(x0);

  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(static_cast<std::size_t>(options.memory));

  int iter = 0;
  bool converged = g.lpNorm<Eigen::Infinity>() <= options.grad_tol;
  while (!converged && iter < options.max_iterations) {
    // Two-loop recursion for d = -H g.
    Eigen::VectorXd q = g;
    const auto m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }

    const double t_init = m == 0 ? std::min(1.0, 1.0 / g.lpNorm<Eigen::Infinity>()) : 1.0;
    LineSearch search(fn, x, dir);
    if (!search.run({0.0, f, slope}, t_init)) {
      if (m == 0) break;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    ++iter;
    Eigen::VectorXd s = search.x() - x;
    Eigen::VectorXd y = search.gradient() - g;
    const double f_prev = f;
    x = search.x();
    g = search.gradient();
    f = search.f();
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      if (static_cast<int>(s_hist.size()) == options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    converged = g.lpNorm<Eigen::Infinity>() <= options.grad_tol ||
                f_prev - f <= options.rel_f_tol * std::max(1.0, std::abs(f));
  }

  result.x = std::move(x);
  result.f = f;
  result.grad_norm = g.lpNorm<Eigen::Infinity>();
  result.iterations = iter;
  result.converged = converged;
  return result;
}

}  // namespace spinlb
