#include "khd/exact_matrix.hpp"

#include <algorithm>
#include <limits>

#include "khd/error.hpp"

namespace khd {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

namespace {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

mpz_class mpz_from_i128(i128 v) {
  const bool negative = v < 0;
  u128 u = negative ? -static_cast<u128>(v) : static_cast<u128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class out = (hi << 64) + lo;
  return negative ? mpz_class(-out) : out;
}

bool fits_i64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

bool fits_i64(const mpz_class& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

std::uint32_t reduce_mod(const mpz_class& v, std::uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return static_cast<std::uint32_t>(r.get_ui());
}

}  // namespace

Domain Domain::prime_field(std::uint32_t p) {
  if (!is_prime(p) || p >= (1u << 31)) {
    throw AlgebraError("prime field characteristic must be a prime below 2^31, got " + std::to_string(p));
  }
  return Domain(Kind::PrimeField, p);
}

Domain Domain::parse(const std::string& name) {
  if (name == "Z") return integers();
  if (name == "Q") return rationals();
  if (name.size() >= 2 && name[0] == 'F') {
    std::uint64_t p = 0;
    for (std::size_t k = 1; k < name.size(); ++k) {
      if (name[k] < '0' || name[k] > '9' || p > (1u << 31)) throw AlgebraError("unknown ring " + name);
      p = p * 10 + static_cast<std::uint64_t>(name[k] - '0');
    }
    return prime_field(static_cast<std::uint32_t>(p));
  }
  throw AlgebraError("unknown ring " + name);
}

std::string Domain::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    case Kind::PrimeField: return "F" + std::to_string(p_);
  }
  return "?";
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, Domain domain)
    : rows_(rows), cols_(cols), domain_(domain) {
  if (rows > std::numeric_limits<std::uint32_t>::max() || cols > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("matrix dimension exceeds 32-bit index range");
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, Domain domain,
                                         std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols, domain);
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  const bool modular = domain.kind() == Domain::Kind::PrimeField;
  const auto p = static_cast<i128>(domain.characteristic());
  m.entries_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const auto row = triplets[k].row;
    const auto col = triplets[k].col;
    if (row >= rows || col >= cols) throw AlgebraError("matrix entry index out of range");
    i128 sum = 0;
    for (; k < triplets.size() && triplets[k].row == row && triplets[k].col == col; ++k) {
      sum += triplets[k].value;
    }
    if (modular) {
      sum %= p;
      if (sum < 0) sum += p;
    }
    if (sum == 0) continue;
    if (fits_i64(sum)) {
      m.entries_.push_back({row, col, static_cast<std::int64_t>(sum)});
    } else {
      m.boxed_.emplace(m.entries_.size(), mpq_class(mpz_from_i128(sum)));
      m.entries_.push_back({row, col, 0});
    }
  }
  return m;
}

SparseMatrix SparseMatrix::from_values(
    std::size_t rows, std::size_t cols, Domain domain,
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> values) {
  SparseMatrix m(rows, cols, domain);
  std::sort(values.begin(), values.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < values.size();) {
    const auto key = values[k].first;
    if (key.first >= rows || key.second >= cols) throw AlgebraError("matrix entry index out of range");
    mpq_class sum = 0;
    for (; k < values.size() && values[k].first == key; ++k) sum += values[k].second;
    sum.canonicalize();
    switch (domain.kind()) {
      case Domain::Kind::Integers:
        if (sum.get_den() != 1) throw AlgebraError("non-integral entry in an integer matrix");
        break;
      case Domain::Kind::PrimeField: {
        const std::uint32_t p = domain.characteristic();
        const std::uint32_t den = reduce_mod(sum.get_den(), p);
        if (den == 0) throw AlgebraError("entry denominator divisible by the field characteristic");
        mpz_class inv;
        mpz_class den_z(den);
        mpz_class p_z(p);
        mpz_invert(inv.get_mpz_t(), den_z.get_mpz_t(), p_z.get_mpz_t());
        const mpz_class num = mpz_class(reduce_mod(sum.get_num(), p)) * inv;
        sum = reduce_mod(num, p);
        break;
      }
      case Domain::Kind::Rationals: break;
    }
    if (sum == 0) continue;
    const auto r = static_cast<std::uint32_t>(key.first);
    const auto c = static_cast<std::uint32_t>(key.second);
    if (sum.get_den() == 1 && fits_i64(sum.get_num())) {
      m.entries_.push_back({r, c, sum.get_num().get_si()});
    } else {
      m.boxed_.emplace(m.entries_.size(), sum);
      m.entries_.push_back({r, c, 0});
    }
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<mpq_class>>& rows, Domain domain) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows[0].size();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> values;
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw AlgebraError("ragged dense matrix");
    for (std::size_t c = 0; c < m; ++c) {
      if (rows[r][c] != 0) values.push_back({{r, c}, rows[r][c]});
    }
  }
  return from_values(n, m, domain, std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n, Domain domain) {
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < n; ++k) {
    t.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k), 1});
  }
  return from_triplets(n, n, domain, std::move(t));
}

mpq_class SparseMatrix::entry_value(std::size_t k) const {
  if (entries_[k].small != 0) return mpq_class(mpz_class(static_cast<long>(entries_[k].small)));
  return boxed_.at(k);
}

bool SparseMatrix::small_value(std::size_t k, std::int64_t* out) const {
  if (entries_[k].small == 0) return false;
  *out = entries_[k].small;
  return true;
}

mpq_class SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{r, c},
                             [](const Entry& e, const std::pair<std::size_t, std::size_t>& key) {
                               return e.row != key.first ? e.row < key.first : e.col < key.second;
                             });
  if (it == entries_.end() || it->row != r || it->col != c) return 0;
  return entry_value(static_cast<std::size_t>(it - entries_.begin()));
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& rhs) const {
  if (!(domain_ == rhs.domain_)) throw AlgebraError("matrix product across different domains");
  if (cols_ != rhs.rows_) throw AlgebraError("matrix product dimension mismatch");

  // Row starts of rhs.
  std::vector<std::size_t> start(rhs.rows_ + 1, 0);
  for (const auto& e : rhs.entries_) ++start[e.row + 1];
  for (std::size_t r = 0; r < rhs.rows_; ++r) start[r + 1] += start[r];

  auto narrow = [](const SparseMatrix& m) {
    constexpr std::int64_t limit = std::int64_t{1} << 31;
    return m.boxed_.empty() && std::all_of(m.entries_.begin(), m.entries_.end(), [](const Entry& e) {
             return e.small > -limit && e.small < limit;
           });
  };
  if (narrow(*this) && narrow(rhs)) {
    const bool modular = domain_.kind() == Domain::Kind::PrimeField;
    const auto p = static_cast<i128>(domain_.characteristic());
    std::vector<i128> acc(rhs.cols_, 0);
    std::vector<char> touched(rhs.cols_, 0);
    std::vector<std::uint32_t> cols_touched;
    SparseMatrix out(rows_, rhs.cols_, domain_);
    for (std::size_t k = 0; k < entries_.size();) {
      const auto row = entries_[k].row;
      for (; k < entries_.size() && entries_[k].row == row; ++k) {
        const i128 a = entries_[k].small;
        const auto mid = entries_[k].col;
        for (std::size_t t = start[mid]; t < start[mid + 1]; ++t) {
          const auto c = rhs.entries_[t].col;
          acc[c] += a * rhs.entries_[t].small;
          if (modular) acc[c] %= p;
          if (!touched[c]) {
            touched[c] = 1;
            cols_touched.push_back(c);
          }
        }
      }
      std::sort(cols_touched.begin(), cols_touched.end());
      for (auto c : cols_touched) {
        i128 v = acc[c];
        if (modular && v < 0) v += p;
        if (v != 0) {
          if (fits_i64(v)) {
            out.entries_.push_back({row, c, static_cast<std::int64_t>(v)});
          } else {
            out.boxed_.emplace(out.entries_.size(), mpq_class(mpz_from_i128(v)));
            out.entries_.push_back({row, c, 0});
          }
        }
        acc[c] = 0;
        touched[c] = 0;
      }
      cols_touched.clear();
    }
    return out;
  }

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> values;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const mpq_class a = entry_value(k);
    const auto mid = entries_[k].col;
    for (std::size_t t = start[mid]; t < start[mid + 1]; ++t) {
      values.push_back({{entries_[k].row, rhs.entries_[t].col}, a * rhs.entry_value(t)});
    }
  }
  return from_values(rows_, rhs.cols_, domain_, std::move(values));
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> values;
  values.reserve(entries_.size());
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    values.push_back({{entries_[k].col, entries_[k].row}, entry_value(k)});
  }
  return from_values(cols_, rows_, domain_, std::move(values));
}

std::vector<std::vector<mpq_class>> SparseMatrix::to_dense() const {
  std::vector<std::vector<mpq_class>> out(rows_, std::vector<mpq_class>(cols_, 0));
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    out[entries_[k].row][entries_[k].col] = entry_value(k);
  }
  return out;
}

bool SparseMatrix::operator==(const SparseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || !(domain_ == other.domain_) ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].row != other.entries_[k].row || entries_[k].col != other.entries_[k].col) return false;
    if (entry_value(k) != other.entry_value(k)) return false;
  }
  return true;
}

}  // namespace khd
