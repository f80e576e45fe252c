#include "khd/jones.hpp"

#include <bit>
#include <sstream>

#include <json.hpp>

#include "khd/error.hpp"

namespace khd {

LaurentPolynomial LaurentPolynomial::monomial(long long coefficient, int exponent) {
  LaurentPolynomial p;
  p.add(exponent, coefficient);
  return p;
}

long long LaurentPolynomial::coefficient(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? 0 : it->second;
}

void LaurentPolynomial::add(int exponent, long long coefficient) {
  if (coefficient == 0) return;
  auto& c = terms_[exponent];
  c += coefficient;
  if (c == 0) terms_.erase(exponent);
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& other) {
  for (const auto& [e, c] : other.terms_) add(e, c);
  return *this;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial p;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) p.add(ea + eb, ca * cb);
  }
  return p;
}

std::string LaurentPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    long long mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      out << mag;
      continue;
    }
    if (mag != 1) out << mag << "*";
    out << "q";
    if (e != 1) out << "^" << e;
  }
  return out.str();
}

std::string LaurentPolynomial::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [e, c] : terms_) doc[std::to_string(e)] = c;
  return doc.dump();
}

namespace {

// Number of circles in the smoothing `state`, by following arcs from slot to
// slot: each arc end sits in one crossing, and the smoothing says which arc
// end it continues into.
int count_circles(const LinkDiagram& d, std::uint32_t state) {
  const auto& crossings = d.crossings();
  // end = 4 * crossing + position; partner[end] = the end it is joined to.
  std::vector<int> joined(4 * crossings.size());
  std::map<int, std::vector<int>> ends_of_arc;
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    const bool one = (state >> c) & 1u;
    const int base = static_cast<int>(4 * c);
    const int pair[4] = {one ? 3 : 1, one ? 2 : 0, one ? 1 : 3, one ? 0 : 2};
    for (int p = 0; p < 4; ++p) {
      joined[base + p] = base + pair[p];
      ends_of_arc[crossings[c].arcs[p]].push_back(base + p);
    }
  }
  std::vector<int> other_end(joined.size());
  for (const auto& [arc, ends] : ends_of_arc) {
    if (ends.size() != 2) throw DiagramError("arc " + std::to_string(arc) + " does not have two ends");
    other_end[ends[0]] = ends[1];
    other_end[ends[1]] = ends[0];
  }
  std::vector<bool> seen(joined.size(), false);
  int circles = 0;
  for (std::size_t start = 0; start < joined.size(); ++start) {
    if (seen[start]) continue;
    ++circles;
    int e = static_cast<int>(start);
    while (!seen[e]) {
      seen[e] = true;
      const int through = joined[e];
      seen[through] = true;
      e = other_end[through];
    }
  }
  return circles + d.free_circles();
}

}  // namespace

LaurentPolynomial kauffman_jones(const LinkDiagram& d) {
  const std::size_t n = d.crossing_count();
  if (n > kMaxCrossings) throw ResourceError("too many crossings for the state sum");
  const LaurentPolynomial loop = LaurentPolynomial::monomial(1, 1) + LaurentPolynomial::monomial(1, -1);
  std::vector<LaurentPolynomial> loop_power{LaurentPolynomial::monomial(1, 0)};
  LaurentPolynomial sum;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
    const int circles = count_circles(d, s);
    while (static_cast<int>(loop_power.size()) <= circles) loop_power.push_back(loop_power.back() * loop);
    const int r = std::popcount(s);
    sum += LaurentPolynomial::monomial(r % 2 ? -1 : 1, r) * loop_power[circles];
  }
  const int np = d.n_plus();
  const int nm = d.n_minus();
  return LaurentPolynomial::monomial(nm % 2 ? -1 : 1, np - 2 * nm) * sum;
}

LaurentPolynomial graded_euler_characteristic(const BigradedGroup& g) {
  LaurentPolynomial p;
  for (const auto& [b, s] : g.groups()) {
    const long long r = static_cast<long long>(s.free_rank);
    p += LaurentPolynomial::monomial(b.i % 2 ? -r : r, b.j);
  }
  return p;
}

}  // namespace khd
