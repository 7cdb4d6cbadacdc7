#include "spinlb/monomial.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

namespace spinlb {

int triple_parity(const Triple& t) {
  int inversions = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (t[a] > t[b]) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

Monomial::Canonical Monomial::canonicalize(std::vector<Pair> pairs,
                                           std::optional<Triple> triple) {
  std::uint64_t seen = 0;
  auto claim = [&seen](Site s) {
    if (s < 1 || s > 64) {
      throw MalformedMonomial("site index out of range: " + std::to_string(s));
    }
    const std::uint64_t bit = std::uint64_t{1} << (s - 1);
    if (seen & bit) {
      throw MalformedMonomial("site " + std::to_string(s) + " appears twice");
    }
    seen |= bit;
  };

  for (auto& p : pairs) {
    claim(p.first);
    claim(p.second);
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  int sign = 1;
  if (triple) {
    for (Site s : *triple) claim(s);
    sign = triple_parity(*triple);
    std::sort(triple->begin(), triple->end());
  }
  std::sort(pairs.begin(), pairs.end());

  Canonical out;
  out.monomial.pairs_ = std::move(pairs);
  out.monomial.triple_ = triple;
  out.sign = sign;
  return out;
}

Monomial Monomial::of(std::vector<Pair> pairs, std::optional<Triple> triple) {
  auto c = canonicalize(std::move(pairs), triple);
  if (c.sign != 1) {
    throw MalformedMonomial("Monomial::of expects an even-ordered triple");
  }
  return std::move(c.monomial);
}

namespace {

std::vector<Site> parse_sites(std::string_view body) {
  std::vector<Site> sites;
  while (!body.empty()) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{}) {
      throw MalformedMonomial("bad site list: " + std::string(body));
    }
    sites.push_back(value);
    body.remove_prefix(static_cast<std::size_t>(ptr - body.data()));
    if (!body.empty()) {
      if (body.front() != ',') throw MalformedMonomial("expected ','");
      body.remove_prefix(1);
    }
  }
  return sites;
}

}  // namespace

Monomial::Canonical Monomial::parse(std::string_view text) {
  std::vector<Pair> pairs;
  std::optional<Triple> triple;
  if (text == "1") return canonicalize({}, std::nullopt);

  while (!text.empty()) {
    const char open = text.front();
    const char close = open == '(' ? ')' : open == '[' ? ']' : '\0';
    if (close == '\0') throw MalformedMonomial("unexpected character in monomial");
    const auto end = text.find(close);
    if (end == std::string_view::npos) throw MalformedMonomial("unterminated factor");
    const auto sites = parse_sites(text.substr(1, end - 1));
    if (open == '(') {
      if (sites.size() != 2) throw MalformedMonomial("scalar product needs two sites");
      pairs.push_back({sites[0], sites[1]});
    } else {
      if (sites.size() != 3 || triple) {
        throw MalformedMonomial("mixed product needs three sites and may appear once");
      }
      triple = Triple{sites[0], sites[1], sites[2]};
    }
    text.remove_prefix(end + 1);
  }
  return canonicalize(std::move(pairs), triple);
}

std::vector<Site> Monomial::support() const {
  std::vector<Site> out;
  out.reserve(support_size());
  for (const auto& p : pairs_) {
    out.push_back(p.first);
    out.push_back(p.second);
  }
  if (triple_) out.insert(out.end(), triple_->begin(), triple_->end());
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t Monomial::support_mask() const {
  std::uint64_t mask = 0;
  for (const auto& p : pairs_) {
    mask |= std::uint64_t{1} << (p.first - 1);
    mask |= std::uint64_t{1} << (p.second - 1);
  }
  if (triple_) {
    for (Site s : *triple_) mask |= std::uint64_t{1} << (s - 1);
  }
  return mask;
}

Site Monomial::max_site() const {
  Site m = 0;
  for (const auto& p : pairs_) m = std::max(m, p.second);
  if (triple_) m = std::max(m, (*triple_)[2]);
  return m;
}

std::string Monomial::to_string() const {
  if (is_identity()) return "1";
  std::string out;
  if (triple_) {
    out += "[" + std::to_string((*triple_)[0]) + "," + std::to_string((*triple_)[1]) +
           "," + std::to_string((*triple_)[2]) + "]";
  }
  for (const auto& p : pairs_) {
    out += "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
  }
  return out;
}

bool basis_order_less(const Monomial& a, const Monomial& b) {
  const bool a_mixed = a.has_triple();
  const bool b_mixed = b.has_triple();
  const auto a_size = a.support_size();
  const auto b_size = b.support_size();
  return std::tie(a_mixed, a_size, a.triple(), a.pairs()) <
         std::tie(b_mixed, b_size, b.triple(), b.pairs());
}

}  // namespace spinlb
