#include "spinlb/relations.hpp"

#include <algorithm>
#include <stdexcept>

namespace spinlb {

namespace {

constexpr Complex kI{0.0, 1.0};

RelationTerm scalar(double c) { return {c, {}, std::nullopt}; }

RelationTerm pairs(Complex c, std::vector<std::array<int, 2>> ps) {
  return {c, std::move(ps), std::nullopt};
}

RelationTerm mixed(Complex c, std::array<int, 3> t, std::vector<std::array<int, 2>> ps = {}) {
  return {c, std::move(ps), t};
}

std::vector<RelationTerm> determinant_terms() {
  // Rows are sites 4,5,6, columns sites 1,2,3; entry (row, col) is (col row).
  std::array<int, 3> cols{1, 2, 3};
  std::vector<RelationTerm> out;
  do {
    const int sign = triple_parity({cols[0], cols[1], cols[2]});
    out.push_back(pairs(static_cast<double>(sign), {{cols[0], 4}, {cols[1], 5}, {cols[2], 6}}));
  } while (std::next_permutation(cols.begin(), cols.end()));
  return out;
}

}  // namespace

RelationTable::RelationTable() {
  using K = RelationKind;
  relations_ = {
      {K::kPairPairTwo, "(12)(12)", {1, 2}, {1, 2},
       {scalar(3.0), pairs(-2.0, {{1, 2}})}},
      {K::kPairPairOne, "(12)(23)", {1, 2}, {2, 3},
       {pairs(1.0, {{1, 3}}), mixed(-kI, {1, 2, 3})}},
      {K::kPairTripleTwo, "(12)[123]", {1, 2}, {1, 2, 3},
       {mixed(-1.0, {1, 2, 3}), pairs(-2.0 * kI, {{1, 3}}), pairs(2.0 * kI, {{2, 3}})}},
      {K::kTriplePairTwo, "[123](12)", {1, 2, 3}, {1, 2},
       {mixed(-1.0, {1, 2, 3}), pairs(2.0 * kI, {{1, 3}}), pairs(-2.0 * kI, {{2, 3}})}},
      {K::kPairTripleOne, "(12)[234]", {1, 2}, {2, 3, 4},
       {mixed(1.0, {1, 3, 4}), pairs(-kI, {{1, 3}, {2, 4}}), pairs(kI, {{1, 4}, {2, 3}})}},
      {K::kTriplePairOne, "[234](12)", {2, 3, 4}, {1, 2},
       {mixed(1.0, {1, 3, 4}), pairs(kI, {{1, 3}, {2, 4}}), pairs(-kI, {{1, 4}, {2, 3}})}},
      {K::kTripleTripleThree, "[123][123]", {1, 2, 3}, {1, 2, 3},
       {scalar(6.0), pairs(-2.0, {{1, 2}}), pairs(-2.0, {{1, 3}}), pairs(-2.0, {{2, 3}})}},
      {K::kTripleTripleTwo, "[123][124]", {1, 2, 3}, {1, 2, 4},
       {pairs(-1.0, {{1, 3}, {2, 4}}), pairs(-1.0, {{1, 4}, {2, 3}}), pairs(2.0, {{3, 4}}),
        mixed(kI, {1, 3, 4}), mixed(kI, {2, 3, 4})}},
      {K::kTripleTripleOne, "[123][145]", {1, 2, 3}, {1, 4, 5},
       {pairs(1.0, {{2, 4}, {3, 5}}), pairs(-1.0, {{2, 5}, {3, 4}}),
        mixed(-kI, {3, 4, 5}, {{1, 2}}), mixed(kI, {2, 4, 5}, {{1, 3}})}},
      {K::kTripleTripleZero, "[123][456]", {1, 2, 3}, {4, 5, 6}, determinant_terms()},
  };
}

const RelationTable& RelationTable::standard() {
  static const RelationTable table;
  return table;
}

const Relation& RelationTable::lookup(std::size_t left_size, std::size_t right_size,
                                      std::size_t shared) const {
  using K = RelationKind;
  if (left_size == 2 && right_size == 2) {
    if (shared == 2) return at(K::kPairPairTwo);
    if (shared == 1) return at(K::kPairPairOne);
  } else if (left_size == 2 && right_size == 3) {
    if (shared == 2) return at(K::kPairTripleTwo);
    if (shared == 1) return at(K::kPairTripleOne);
  } else if (left_size == 3 && right_size == 2) {
    if (shared == 2) return at(K::kTriplePairTwo);
    if (shared == 1) return at(K::kTriplePairOne);
  } else if (left_size == 3 && right_size == 3) {
    switch (shared) {
      case 3: return at(K::kTripleTripleThree);
      case 2: return at(K::kTripleTripleTwo);
      case 1: return at(K::kTripleTripleOne);
      case 0: return at(K::kTripleTripleZero);
      default: break;
    }
  }
  throw std::logic_error("no reduction rule for factor shape");
}

}  // namespace spinlb
