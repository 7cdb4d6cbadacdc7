#include "spinlb/structure_tensor.hpp"

#include <cmath>

namespace spinlb {

StructureTensor::StructureTensor(int n, std::vector<Monomial> basis,
                                 std::vector<std::vector<TensorEntry>> coeffs)
    : n_(n), basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.size()) {
    throw std::invalid_argument("structure tensor needs one coefficient block per basis element");
  }
  for (std::size_t k = 0; k < basis_.size(); ++k) index_.emplace(basis_[k], k);
  for (const auto& block : coeffs_) {
    for (const auto& e : block) {
      if (e.i > e.j || e.j >= basis_.size()) {
        throw std::invalid_argument("structure tensor entry out of range");
      }
    }
  }
}

std::size_t StructureTensor::index_of(const Monomial& m) const {
  const auto it = index_.find(m);
  if (it == index_.end()) throw std::out_of_range("monomial " + m.to_string() + " not in basis");
  return it->second;
}

double StructureTensor::coeff(std::size_t k, std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  for (const auto& e : coeffs_.at(k)) {
    if (e.i == i && e.j == j) return e.value;
  }
  return 0.0;
}

Eigen::SparseMatrix<double> StructureTensor::matrix(std::size_t k) const {
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& e : coeffs_.at(k)) {
    trips.emplace_back(static_cast<int>(e.i), static_cast<int>(e.j), e.value);
    if (e.i != e.j) trips.emplace_back(static_cast<int>(e.j), static_cast<int>(e.i), e.value);
  }
  const auto dim = static_cast<Eigen::Index>(basis_.size());
  Eigen::SparseMatrix<double> out(dim, dim);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd StructureTensor::square_coefficients(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != basis_.size()) {
    throw std::invalid_argument("coefficient vector has the wrong length");
  }
  Eigen::VectorXd out(b.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double s = 0.0;
    for (const auto& e : coeffs_[k]) {
      const double w = e.i == e.j ? 1.0 : 2.0;
      s += w * e.value * b(static_cast<Eigen::Index>(e.i)) * b(static_cast<Eigen::Index>(e.j));
    }
    out(static_cast<Eigen::Index>(k)) = s;
  }
  return out;
}

Eigen::VectorXd StructureTensor::density_coefficients(const Eigen::VectorXd& b) const {
  Eigen::VectorXd a = square_coefficients(b);
  return a / a(0);
}

nlohmann::json StructureTensor::to_json() const {
  nlohmann::json doc;
  doc["version"] = kStructureTensorFormatVersion;
  doc["n"] = n_;
  auto& basis = doc["basis"] = nlohmann::json::array();
  for (const auto& m : basis_) basis.push_back(m.to_string());
  auto& coeffs = doc["coeffs"] = nlohmann::json::array();
  for (const auto& block : coeffs_) {
    auto row = nlohmann::json::array();
    for (const auto& e : block) row.push_back({e.i, e.j, e.value});
    coeffs.push_back(std::move(row));
  }
  return doc;
}

StructureTensor StructureTensor::from_json(const nlohmann::json& doc) {
  if (doc.at("version").get<int>() != kStructureTensorFormatVersion) {
    throw std::runtime_error("unsupported structure tensor version");
  }
  const int n = doc.at("n").get<int>();
  std::vector<Monomial> basis;
  for (const auto& s : doc.at("basis")) {
    auto c = Monomial::parse(s.get<std::string>());
    if (c.sign != 1) throw std::runtime_error("basis entry is not canonical: " + s.get<std::string>());
    basis.push_back(std::move(c.monomial));
  }
  std::vector<std::vector<TensorEntry>> coeffs;
  for (const auto& row : doc.at("coeffs")) {
    std::vector<TensorEntry> block;
    for (const auto& e : row) {
      block.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>()});
    }
    coeffs.push_back(std::move(block));
  }
  return StructureTensor(n, std::move(basis), std::move(coeffs));
}

namespace {

/// Gram matrix of the mixed-product sector, used to decide whether a
/// non-zero mixed residue is a representation of the zero operator.
class MixedSectorGram {
 public:
  MixedSectorGram(int n, const RelationTable& rules) : n_(n), rules_(rules) {}

  double norm_squared(const OperatorPoly& residue) {
    if (!ready_) build();
    Complex total = 0.0;
    for (const auto& [x, cx] : residue.terms()) {
      const auto a = index_.at(x);
      for (const auto& [y, cy] : residue.terms()) {
        total += std::conj(cx) * cy * gram_(a, index_.at(y));
      }
    }
    return total.real();
  }

 private:
  void build() {
    std::vector<Monomial> mixed;
    for (auto& m : enumerate_basis(n_, Sector::kAB)) {
      if (m.has_triple()) mixed.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < mixed.size(); ++k) index_.emplace(mixed[k], static_cast<Eigen::Index>(k));
    const auto size = static_cast<Eigen::Index>(mixed.size());
    gram_ = Eigen::MatrixXd::Zero(size, size);
    const double dim = std::ldexp(1.0, n_);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = a; b < size; ++b) {
        const auto& x = mixed[static_cast<std::size_t>(a)];
        const auto& y = mixed[static_cast<std::size_t>(b)];
        if (x.support_mask() != y.support_mask()) continue;
        gram_(a, b) = gram_(b, a) = trace_inner(x, y, n_, rules_) / dim;
      }
    }
    ready_ = true;
  }

  int n_;
  const RelationTable& rules_;
  bool ready_ = false;
  std::map<Monomial, Eigen::Index> index_;
  Eigen::MatrixXd gram_;
};

}  // namespace

StructureTensor build_structure_tensor(int n, const RelationTable& rules, double tolerance) {
  auto basis = enumerate_basis(n, Sector::kA);
  std::map<Monomial, std::size_t> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(basis[k], k);

  MixedSectorGram mixed_gram(n, rules);
  std::vector<std::vector<TensorEntry>> coeffs(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      OperatorPoly anti = multiply(basis[i], basis[j], n, rules);
      if (i != j) anti += multiply(basis[j], basis[i], n, rules);
      anti *= (i == j) ? 1.0 : 0.5;

      OperatorPoly residue(n);
      for (const auto& [m, c] : anti.terms()) {
        if (m.has_triple()) {
          residue.add(m, c);
        } else if (std::abs(c.imag()) > tolerance) {
          throw InternalConsistencyError("anticommutator of " + basis[i].to_string() + " and " +
                                         basis[j].to_string() + " has an imaginary coefficient");
        } else {
          coeffs[index.at(m)].push_back({i, j, c.real()});
        }
      }
      // Mixed parts may cancel only up to the linear dependencies of the
      // mixed sector, so fall back to the operator norm.
      if (residue.max_abs_coeff() > tolerance &&
          mixed_gram.norm_squared(residue) > tolerance * tolerance) {
        throw InternalConsistencyError("anticommutator of " + basis[i].to_string() + " and " +
                                       basis[j].to_string() + " leaves residue " +
                                       residue.to_string());
      }
    }
  }
  return StructureTensor(n, std::move(basis), std::move(coeffs));
}

std::uint64_t basis_hash(const std::vector<Monomial>& basis) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& m : basis) {
    for (char ch : m.to_string() + ";") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace spinlb
