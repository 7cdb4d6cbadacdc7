#include "spinlb/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace spinlb {

namespace {

void check_capacity(int n, int cap) {
  if (n < 1) throw std::invalid_argument("site count must be positive");
  if (n > cap) {
    throw CapacityError("dense representation for n=" + std::to_string(n) +
                        " exceeds the cap of " + std::to_string(cap));
  }
}

struct SiteAxis {
  Site site;
  int axis;
};

/// Adds coeff * (tensor product of the listed Pauli matrices) into `out`.
/// Each Pauli string is a phased permutation matrix: X and Y flip the site's
/// bit, Y and Z contribute phases.
void add_pauli_string(int n, const std::vector<SiteAxis>& string, Complex coeff,
                      Eigen::MatrixXcd& out) {
  const std::size_t dim = std::size_t{1} << n;
  std::size_t flip = 0;
  for (const auto& [site, axis] : string) {
    if (axis != 2) flip |= std::size_t{1} << (n - site);
  }
  for (std::size_t col = 0; col < dim; ++col) {
    Complex phase = coeff;
    for (const auto& [site, axis] : string) {
      const bool bit = (col >> (n - site)) & 1;
      if (axis == 1) {
        // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
        phase *= bit ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
      } else if (axis == 2 && bit) {
        phase = -phase;
      }
    }
    out(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += phase;
  }
}

constexpr std::array<std::array<int, 3>, 6> kPermutations{{
    {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};

}  // namespace

DenseOperator::DenseOperator(int n, Eigen::MatrixXcd matrix) : n_(n), matrix_(std::move(matrix)) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("dense operator dimension must be 2^n");
  }
}

bool DenseOperator::is_hermitian(double tol) const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXcd pauli_on_site(int n, Site site, int axis) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  add_pauli_string(n, {{site, axis}}, 1.0, out);
  return out;
}

DenseOperator represent(const Monomial& m, int n, int cap) {
  check_capacity(n, cap);
  if (m.max_site() > n) throw MalformedMonomial("monomial exceeds site count");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);

  // Expand every scalar product over its three axes and the mixed product
  // over the six signed axis permutations.
  const auto& pairs = m.pairs();
  const std::size_t pair_count = pairs.size();
  std::size_t pair_combos = 1;
  for (std::size_t k = 0; k < pair_count; ++k) pair_combos *= 3;
  const std::size_t triple_combos = m.has_triple() ? kPermutations.size() : 1;

  std::vector<SiteAxis> string;
  for (std::size_t combo = 0; combo < pair_combos; ++combo) {
    std::size_t code = combo;
    string.clear();
    for (const auto& p : pairs) {
      const int axis = static_cast<int>(code % 3);
      code /= 3;
      string.push_back({p.first, axis});
      string.push_back({p.second, axis});
    }
    const std::size_t base = string.size();
    for (std::size_t t = 0; t < triple_combos; ++t) {
      string.resize(base);
      double sign = 1.0;
      if (m.has_triple()) {
        const auto& tri = *m.triple();
        const auto& perm = kPermutations[t];
        sign = t < 3 ? 1.0 : -1.0;
        for (int k = 0; k < 3; ++k) string.push_back({tri[k], perm[k]});
      }
      add_pauli_string(n, string, sign, out);
    }
  }
  return DenseOperator(n, std::move(out));
}

DenseOperator represent(const OperatorPoly& p, int n, int cap) {
  check_capacity(n, cap);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [m, c] : p.terms()) out += c * represent(m, n, cap).matrix();
  return DenseOperator(n, std::move(out));
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index size = a.rows();
  if (a.cols() != size) throw std::invalid_argument("matrix must be square");
  const double scale = std::max(1.0, a.norm());

  auto off_diagonal_mass = [&a, size]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < size; ++p) {
      for (Eigen::Index q = p + 1; q < size; ++q) s += 2.0 * a(p, q) * a(p, q);
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_mass() < 1e-12 * scale) break;
    for (Eigen::Index p = 0; p < size - 1; ++p) {
      for (Eigen::Index q = p + 1; q < size; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J^T A J applied to rows and columns p, q.
        for (Eigen::Index k = 0; k < size; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < size; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  Eigen::VectorXd eig = a.diagonal();
  std::sort(eig.begin(), eig.end());
  return eig;
}

Eigen::VectorXd eigenvalues(const DenseOperator& op) {
  if (!op.is_hermitian()) throw ContractViolation("operator is not Hermitian");
  const Eigen::MatrixXcd& m = op.matrix();
  const Eigen::MatrixXd re = m.real();
  const Eigen::MatrixXd im = m.imag();
  if (im.cwiseAbs().maxCoeff() == 0.0) return jacobi_eigenvalues(0.5 * (re + re.transpose()));

  const Eigen::Index dim = m.rows();
  Eigen::MatrixXd embed(2 * dim, 2 * dim);
  embed << re, -im, im, re;
  embed = 0.5 * (embed + embed.transpose()).eval();
  const Eigen::VectorXd doubled = jacobi_eigenvalues(std::move(embed));
  Eigen::VectorXd out(dim);
  for (Eigen::Index k = 0; k < dim; ++k) out(k) = doubled(2 * k);
  return out;
}

double min_eigenvalue(const DenseOperator& op) { return eigenvalues(op)(0); }

bool spectrum_positivity(const DenseOperator& op) { return min_eigenvalue(op) >= -1e-9; }

}  // namespace spinlb
