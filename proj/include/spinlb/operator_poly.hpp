#pragma once

#include <complex>
#include <map>

#include "spinlb/monomial.hpp"

namespace spinlb {

using Complex = std::complex<double>;

/// Coefficients with magnitude below this are dropped.
inline constexpr double kPruneThreshold = 1e-12;

/// Sparse complex linear combination of canonical monomials on sites 1..n.
class OperatorPoly {
 public:
  using Terms = std::map<Monomial, Complex>;

  explicit OperatorPoly(int site_count = 0) : site_count_(site_count) {}

  static OperatorPoly single(const Monomial& m, int site_count, Complex coeff = 1.0);

  int site_count() const { return site_count_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coeff(const Monomial& m) const;

  /// Adds c * m, dropping the entry if the result falls below the prune threshold.
  void add(const Monomial& m, Complex c);

  OperatorPoly& operator+=(const OperatorPoly& other);
  OperatorPoly& operator-=(const OperatorPoly& other);
  OperatorPoly& operator*=(Complex c);

  /// Largest coefficient magnitude, 0 for the zero polynomial.
  double max_abs_coeff() const;

  std::string to_string() const;

 private:
  void check_site(const Monomial& m) const;

  int site_count_;
  Terms terms_;
};

OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b);
OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b);
OperatorPoly operator*(Complex c, OperatorPoly a);

}  // namespace spinlb
