#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

namespace khd {

/// Coefficient domain of a matrix or homology group.
class Domain {
 public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Domain integers() { return Domain(Kind::Integers, 0); }
  static Domain rationals() { return Domain(Kind::Rationals, 0); }
  /// Throws AlgebraError unless p is a prime below 2^31.
  static Domain prime_field(std::uint32_t p);
  /// "Z", "Q", "F2", "F3", ...
  static Domain parse(const std::string& name);

  Kind kind() const { return kind_; }
  std::uint32_t characteristic() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  std::string name() const;

  bool operator==(const Domain&) const = default;

 private:
  Domain(Kind k, std::uint32_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint32_t p_;
};

/// Sparse matrix with exact coefficients. Entries are kept sorted by
/// (row, col); none is zero. Machine-word integers are stored inline and
/// anything larger (or non-integral) in a side table.
class SparseMatrix {
 public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    std::int64_t value;
  };

  SparseMatrix() : SparseMatrix(0, 0, Domain::integers()) {}
  SparseMatrix(std::size_t rows, std::size_t cols, Domain domain);

  /// Sums duplicates, reduces modulo p over prime fields and drops zeros.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, Domain domain,
                                    std::vector<Triplet> triplets);
  /// Dense row-major input, for tests and small examples.
  static SparseMatrix from_dense(const std::vector<std::vector<mpq_class>>& rows, Domain domain);
  static SparseMatrix identity(std::size_t n, Domain domain);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  const Domain& domain() const { return domain_; }
  bool is_zero() const { return entries_.empty(); }

  mpq_class at(std::size_t r, std::size_t c) const;
  std::size_t entry_row(std::size_t k) const { return entries_[k].row; }
  std::size_t entry_col(std::size_t k) const { return entries_[k].col; }
  mpq_class entry_value(std::size_t k) const;
  /// True when entry k fits in an int64; then *out receives it.
  bool small_value(std::size_t k, std::int64_t* out) const;

  /// this * rhs over the common domain; throws AlgebraError on mismatch.
  SparseMatrix multiply(const SparseMatrix& rhs) const;
  SparseMatrix transpose() const;
  std::vector<std::vector<mpq_class>> to_dense() const;

  bool operator==(const SparseMatrix& other) const;

 private:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    std::int64_t small;  // 0 marks a boxed value
  };

  static SparseMatrix from_values(std::size_t rows, std::size_t cols, Domain domain,
                                  std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> values);

  std::size_t rows_;
  std::size_t cols_;
  Domain domain_;
  std::vector<Entry> entries_;
  std::unordered_map<std::size_t, mpq_class> boxed_;
};

}  // namespace khd
