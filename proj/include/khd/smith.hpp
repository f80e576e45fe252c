#pragma once

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "khd/exact_matrix.hpp"

namespace khd {

/// Finitely generated abelian group (or vector space): Z^free + sum Z/d_k,
/// torsion sorted so that d_1 | d_2 | ... and every d_k >= 2.
struct GroupSummand {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const GroupSummand&) const = default;
};

/// What homology needs from one differential: its rank over the fraction
/// field (or prime field) and, over the integers, the invariant factors > 1.
struct Reduction {
  std::size_t rank = 0;
  std::vector<mpz_class> torsion;
};

/// Sparse elimination on a private copy of `m`. Unit pivots are taken first in
/// Markowitz order (shortest row, then sparsest column); over the integers the
/// leftover block is diagonalised by gcd steps on pivot rows and columns.
Reduction reduce(const SparseMatrix& m);

/// Invariant factors d_1 | ... | d_r (including leading 1s), r = rational rank.
/// Throws AlgebraError for non-integer domains.
std::vector<mpz_class> smith_normal_form(const SparseMatrix& m);

/// Rank over Q (integers, rationals) or over the prime field.
std::size_t rank(const SparseMatrix& m);

/// ker(d_out) / im(d_in) at the middle term. Throws AlgebraError when the
/// dimensions or domains disagree or d_out * d_in != 0.
GroupSummand homology_at(const SparseMatrix& d_in, const SparseMatrix& d_out);

/// Same, from precomputed reductions of the two differentials.
GroupSummand homology_from(std::size_t dimension, const Reduction& incoming, const Reduction& outgoing);

/// Turns arbitrary diagonal entries into a divisibility chain of invariant
/// factors, dropping units and zeros.
std::vector<mpz_class> diagonal_to_invariants(std::vector<mpz_class> diagonal);

}  // namespace khd
