#include "spinlb/operator_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spinlb {

OperatorPoly OperatorPoly::single(const Monomial& m, int site_count, Complex coeff) {
  OperatorPoly p(site_count);
  p.add(m, coeff);
  return p;
}

void OperatorPoly::check_site(const Monomial& m) const {
  if (m.max_site() > site_count_) {
    throw MalformedMonomial("monomial " + m.to_string() + " exceeds site count " +
                            std::to_string(site_count_));
  }
}

Complex OperatorPoly::coeff(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

void OperatorPoly::add(const Monomial& m, Complex c) {
  check_site(m);
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& other) {
  site_count_ = std::max(site_count_, other.site_count_);
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

OperatorPoly& OperatorPoly::operator-=(const OperatorPoly& other) {
  site_count_ = std::max(site_count_, other.site_count_);
  for (const auto& [m, c] : other.terms_) add(m, -c);
  return *this;
}

OperatorPoly& OperatorPoly::operator*=(Complex c) {
  if (std::abs(c) == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    if (std::abs(it->second) < kPruneThreshold) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

double OperatorPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

std::string OperatorPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")*" << m.to_string();
  }
  return os.str();
}

OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }
OperatorPoly operator*(Complex c, OperatorPoly a) { return a *= c; }

}  // namespace spinlb
