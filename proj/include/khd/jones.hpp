#pragma once

#include <map>
#include <string>

#include "khd/khovanov.hpp"
#include "khd/link_diagram.hpp"

namespace khd {

/// Integer Laurent polynomial in q.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  static LaurentPolynomial monomial(long long coefficient, int exponent);

  const std::map<int, long long>& terms() const { return terms_; }
  long long coefficient(int exponent) const;
  bool is_zero() const { return terms_.empty(); }

  LaurentPolynomial& operator+=(const LaurentPolynomial& other);
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
  bool operator==(const LaurentPolynomial&) const = default;

  /// "q^-1 + q", highest power last; "0" for the zero polynomial.
  std::string to_string() const;
  /// {"q^k": coefficient} as a JSON object keyed by exponent.
  std::string to_json() const;

 private:
  void add(int exponent, long long coefficient);
  std::map<int, long long> terms_;
};

/// Unnormalised Jones polynomial from the bracket state sum:
/// (-1)^{n_-} q^{n_+ - 2 n_-} * sum_s (-q)^{r(s)} (q + q^-1)^{circles(s)}.
/// Counts state circles by walking arcs, without the homology machinery.
LaurentPolynomial kauffman_jones(const LinkDiagram& d);

/// sum (-1)^i q^j rank over (i, j), ranks taken natively (free ranks over Z).
LaurentPolynomial graded_euler_characteristic(const BigradedGroup& g);

}  // namespace khd
