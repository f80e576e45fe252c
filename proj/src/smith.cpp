#include "khd/smith.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>

#include "khd/error.hpp"

namespace khd {

namespace {

struct Overflow {};

// Scalar policies. Each provides: T, zero(), unit(), sub_mul(x, f, y) = x - f*y,
// unit_factor(a, pivot) = a / pivot for a unit pivot, and for Euclidean
// domains quotient(), abs_less() and magnitude().

struct Int64Ops {
  using T = std::int64_t;
  static constexpr bool euclidean = true;
  bool zero(T v) const { return v == 0; }
  bool unit(T v) const { return v == 1 || v == -1; }
  T sub_mul(T x, T f, T y) const {
    T prod;
    T out;
    if (__builtin_mul_overflow(f, y, &prod) || __builtin_sub_overflow(x, prod, &out)) throw Overflow{};
    return out;
  }
  T unit_factor(T a, T pivot) const { return pivot == 1 ? a : sub_mul(0, a, 1); }
  T quotient(T a, T b) const {
    if (a == std::numeric_limits<T>::min() && b == -1) throw Overflow{};
    return a / b;
  }
  static std::uint64_t mag(T v) { return v < 0 ? -static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v); }
  bool abs_less(T a, T b) const { return mag(a) < mag(b); }
  mpz_class magnitude(T v) const {
    mpz_class out(static_cast<unsigned long>(mag(v)));
    return out;
  }
};

struct MpzOps {
  using T = mpz_class;
  static constexpr bool euclidean = true;
  bool zero(const T& v) const { return sgn(v) == 0; }
  bool unit(const T& v) const { return v == 1 || v == -1; }
  T sub_mul(const T& x, const T& f, const T& y) const { return x - f * y; }
  T unit_factor(const T& a, const T& pivot) const { return pivot == 1 ? a : T(-a); }
  T quotient(const T& a, const T& b) const {
    T q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  bool abs_less(const T& a, const T& b) const { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0; }
  mpz_class magnitude(const T& v) const { return abs(v); }
};

struct ModOps {
  using T = std::uint32_t;
  static constexpr bool euclidean = false;
  std::uint32_t p;
  bool zero(T v) const { return v == 0; }
  bool unit(T v) const { return v != 0; }
  T mul(T a, T b) const { return static_cast<T>(static_cast<std::uint64_t>(a) * b % p); }
  T sub_mul(T x, T f, T y) const {
    const std::uint64_t prod = static_cast<std::uint64_t>(f) * y % p;
    return static_cast<T>((x + p - prod) % p);
  }
  T inverse(T a) const {
    // Fermat: a^(p-2).
    std::uint64_t result = 1;
    std::uint64_t base = a;
    std::uint32_t e = p - 2;
    while (e > 0) {
      if (e & 1u) result = result * base % p;
      base = base * base % p;
      e >>= 1u;
    }
    return static_cast<T>(result);
  }
  T unit_factor(T a, T pivot) const { return mul(a, inverse(pivot)); }
  T quotient(T, T) const { return 0; }
  bool abs_less(T, T) const { return false; }
  mpz_class magnitude(T) const { return 1; }
};

template <class Ops>
class Eliminator {
 public:
  using T = typename Ops::T;

  Eliminator(Ops ops, std::size_t rows, std::size_t cols)
      : ops_(std::move(ops)), rows_(rows), alive_(rows, 1), col_rows_(cols), col_count_(cols, 0), stamp_(rows, 0) {}

  void set_row(std::size_t r, std::vector<std::uint32_t> cols, std::vector<T> vals) {
    for (auto c : cols) {
      col_rows_[c].push_back(static_cast<std::uint32_t>(r));
      ++col_count_[c];
    }
    rows_[r].cols = std::move(cols);
    rows_[r].vals = std::move(vals);
  }

  /// Eliminates unit pivots until none remain. Returns the number of pivots.
  std::size_t eliminate_units() {
    using Key = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (!rows_[r].cols.empty()) queue.push({rows_[r].cols.size(), static_cast<std::uint32_t>(r)});
    }
    std::size_t pivots = 0;
    while (!queue.empty()) {
      const auto [len, r] = queue.top();
      queue.pop();
      if (!alive_[r] || rows_[r].cols.size() != len) continue;
      const Row& row = rows_[r];
      std::size_t best = row.cols.size();
      for (std::size_t k = 0; k < row.cols.size(); ++k) {
        if (!ops_.unit(row.vals[k])) continue;
        if (best == row.cols.size() || col_count_[row.cols[k]] < col_count_[row.cols[best]]) best = k;
      }
      if (best == row.cols.size()) continue;  // no unit here; revisited if the row changes
      const std::uint32_t c = row.cols[best];
      const T pivot = row.vals[best];
      for (std::uint32_t t : rows_touching(c, r)) {
        const T f = ops_.unit_factor(value_at(t, c), pivot);
        axpy(t, f, r);
        if (!rows_[t].cols.empty()) queue.push({rows_[t].cols.size(), t});
      }
      kill_row(r);
      ++pivots;
    }
    return pivots;
  }

  /// Diagonalises whatever is left using Euclidean steps; appends the
  /// absolute values of the resulting diagonal entries.
  void eliminate_euclidean(std::vector<mpz_class>& diagonal) {
    for (;;) {
      // Entry of least magnitude overall.
      std::size_t pr = rows_.size();
      std::size_t pk = 0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (!alive_[r]) continue;
        for (std::size_t k = 0; k < rows_[r].cols.size(); ++k) {
          if (pr == rows_.size() || ops_.abs_less(rows_[r].vals[k], rows_[pr].vals[pk])) {
            pr = r;
            pk = k;
          }
        }
      }
      if (pr == rows_.size()) return;
      std::uint32_t r = static_cast<std::uint32_t>(pr);
      std::uint32_t c = rows_[pr].cols[pk];
      for (;;) {
        // Clear column c with row operations.
        std::uint32_t smallest = r;
        const T pivot = value_at(r, c);
        for (std::uint32_t t : rows_touching(c, r)) {
          const T q = ops_.quotient(value_at(t, c), pivot);
          if (!ops_.zero(q)) axpy(t, q, r);
          if (has(t, c) && (smallest == r || ops_.abs_less(value_at(t, c), value_at(smallest, c)))) {
            smallest = t;
          }
        }
        if (smallest != r) {
          r = smallest;
          continue;
        }
        // Column c now holds only the pivot, so column operations touch row r alone.
        Row& row = rows_[r];
        const T p = value_at(r, c);
        std::size_t next = row.cols.size();
        std::vector<std::uint32_t> cols;
        std::vector<T> vals;
        for (std::size_t k = 0; k < row.cols.size(); ++k) {
          if (row.cols[k] == c) {
            cols.push_back(c);
            vals.push_back(p);
            continue;
          }
          T v = ops_.sub_mul(row.vals[k], ops_.quotient(row.vals[k], p), p);
          if (ops_.zero(v)) {
            --col_count_[row.cols[k]];
            continue;
          }
          if (next == row.cols.size() || ops_.abs_less(v, vals[next])) next = cols.size();
          cols.push_back(row.cols[k]);
          vals.push_back(std::move(v));
        }
        row.cols = std::move(cols);
        row.vals = std::move(vals);
        if (row.cols.size() == 1) {
          diagonal.push_back(ops_.magnitude(p));
          kill_row(r);
          break;
        }
        c = row.cols[next];
      }
    }
  }

 private:
  struct Row {
    std::vector<std::uint32_t> cols;
    std::vector<T> vals;
  };

  bool has(std::uint32_t r, std::uint32_t c) const {
    const auto& cols = rows_[r].cols;
    return std::binary_search(cols.begin(), cols.end(), c);
  }

  const T& value_at(std::uint32_t r, std::uint32_t c) const {
    const auto& cols = rows_[r].cols;
    const auto it = std::lower_bound(cols.begin(), cols.end(), c);
    return rows_[r].vals[static_cast<std::size_t>(it - cols.begin())];
  }

  /// Alive rows other than `skip` holding an entry in column c, deduplicated.
  std::vector<std::uint32_t> rows_touching(std::uint32_t c, std::uint32_t skip) {
    ++epoch_;
    std::vector<std::uint32_t> out;
    std::vector<std::uint32_t> keep;
    for (std::uint32_t t : col_rows_[c]) {
      if (!alive_[t] || stamp_[t] == epoch_ || !has(t, c)) continue;
      stamp_[t] = epoch_;
      keep.push_back(t);
      if (t != skip) out.push_back(t);
    }
    col_rows_[c] = std::move(keep);
    return out;
  }

  /// row t -= f * row r
  void axpy(std::uint32_t t, const T& f, std::uint32_t r) {
    const Row& src = rows_[r];
    Row& dst = rows_[t];
    Row merged;
    merged.cols.reserve(dst.cols.size() + src.cols.size());
    merged.vals.reserve(dst.cols.size() + src.cols.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < dst.cols.size() || j < src.cols.size()) {
      if (j == src.cols.size() || (i < dst.cols.size() && dst.cols[i] < src.cols[j])) {
        merged.cols.push_back(dst.cols[i]);
        merged.vals.push_back(std::move(dst.vals[i]));
        ++i;
      } else if (i == dst.cols.size() || src.cols[j] < dst.cols[i]) {
        const std::uint32_t col = src.cols[j];
        T v = ops_.sub_mul(T{0}, f, src.vals[j]);
        merged.cols.push_back(col);
        merged.vals.push_back(std::move(v));
        col_rows_[col].push_back(t);
        ++col_count_[col];
        ++j;
      } else {
        T v = ops_.sub_mul(dst.vals[i], f, src.vals[j]);
        if (ops_.zero(v)) {
          --col_count_[dst.cols[i]];
        } else {
          merged.cols.push_back(dst.cols[i]);
          merged.vals.push_back(std::move(v));
        }
        ++i;
        ++j;
      }
    }
    dst = std::move(merged);
  }

  void kill_row(std::uint32_t r) {
    for (auto c : rows_[r].cols) --col_count_[c];
    rows_[r] = Row{};
    alive_[r] = 0;
  }

  Ops ops_;
  std::vector<Row> rows_;
  std::vector<char> alive_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::size_t> col_count_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

/// Integer rows of m, with rational rows scaled by the lcm of their denominators.
template <class Fill>
void integer_rows(const SparseMatrix& m, Fill&& fill) {
  std::size_t k = 0;
  std::vector<std::uint32_t> cols;
  std::vector<mpq_class> vals;
  while (k < m.nnz()) {
    const std::size_t r = m.entry_row(k);
    cols.clear();
    vals.clear();
    mpz_class scale = 1;
    for (; k < m.nnz() && m.entry_row(k) == r; ++k) {
      cols.push_back(static_cast<std::uint32_t>(m.entry_col(k)));
      vals.push_back(m.entry_value(k));
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), vals.back().get_den_mpz_t());
    }
    std::vector<mpz_class> ints;
    ints.reserve(vals.size());
    for (const auto& v : vals) ints.push_back(mpz_class(v.get_num() * (scale / v.get_den())));
    fill(r, cols, std::move(ints));
  }
}

Reduction reduce_integer_mpz(const SparseMatrix& m) {
  Eliminator<MpzOps> e(MpzOps{}, m.rows(), m.cols());
  integer_rows(m, [&](std::size_t r, const std::vector<std::uint32_t>& cols, std::vector<mpz_class> vals) {
    e.set_row(r, cols, std::move(vals));
  });
  Reduction out;
  out.rank = e.eliminate_units();
  std::vector<mpz_class> diagonal;
  e.eliminate_euclidean(diagonal);
  out.rank += diagonal.size();
  out.torsion = diagonal_to_invariants(std::move(diagonal));
  return out;
}

Reduction reduce_integer(const SparseMatrix& m) {
  bool small = true;
  std::int64_t v = 0;
  for (std::size_t k = 0; k < m.nnz() && small; ++k) small = m.small_value(k, &v);
  if (small) {
    try {
      Eliminator<Int64Ops> e(Int64Ops{}, m.rows(), m.cols());
      std::size_t k = 0;
      while (k < m.nnz()) {
        const std::size_t r = m.entry_row(k);
        std::vector<std::uint32_t> cols;
        std::vector<std::int64_t> vals;
        for (; k < m.nnz() && m.entry_row(k) == r; ++k) {
          m.small_value(k, &v);
          cols.push_back(static_cast<std::uint32_t>(m.entry_col(k)));
          vals.push_back(v);
        }
        e.set_row(r, std::move(cols), std::move(vals));
      }
      Reduction out;
      out.rank = e.eliminate_units();
      std::vector<mpz_class> diagonal;
      e.eliminate_euclidean(diagonal);
      out.rank += diagonal.size();
      out.torsion = diagonal_to_invariants(std::move(diagonal));
      return out;
    } catch (const Overflow&) {
      // Entries outgrew 64 bits; redo the reduction with arbitrary precision.
    }
  }
  return reduce_integer_mpz(m);
}

Reduction reduce_modular(const SparseMatrix& m) {
  const std::uint32_t p = m.domain().characteristic();
  Eliminator<ModOps> e(ModOps{p}, m.rows(), m.cols());
  std::size_t k = 0;
  while (k < m.nnz()) {
    const std::size_t r = m.entry_row(k);
    std::vector<std::uint32_t> cols;
    std::vector<std::uint32_t> vals;
    for (; k < m.nnz() && m.entry_row(k) == r; ++k) {
      cols.push_back(static_cast<std::uint32_t>(m.entry_col(k)));
      std::int64_t v = 0;
      if (m.small_value(k, &v)) {
        vals.push_back(static_cast<std::uint32_t>(((v % p) + p) % p));
      } else {
        const mpq_class q = m.entry_value(k);
        mpz_class rem;
        mpz_fdiv_r_ui(rem.get_mpz_t(), q.get_num_mpz_t(), p);
        vals.push_back(static_cast<std::uint32_t>(rem.get_ui()));
      }
    }
    e.set_row(r, std::move(cols), std::move(vals));
  }
  Reduction out;
  out.rank = e.eliminate_units();
  return out;
}

}  // namespace

std::vector<mpz_class> diagonal_to_invariants(std::vector<mpz_class> diagonal) {
  std::vector<mpz_class> d;
  for (auto& x : diagonal) {
    mpz_class a = abs(x);
    if (a > 1) d.push_back(std::move(a));
  }
  std::sort(d.begin(), d.end());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), d[i].get_mpz_t(), d[j].get_mpz_t());
      if (g == d[i]) continue;
      d[j] = d[i] / g * d[j];
      d[i] = g;
    }
  }
  std::erase_if(d, [](const mpz_class& x) { return x == 1; });
  return d;
}

Reduction reduce(const SparseMatrix& m) {
  switch (m.domain().kind()) {
    case Domain::Kind::Integers: return reduce_integer(m);
    case Domain::Kind::Rationals: {
      Reduction r = reduce_integer(m);
      r.torsion.clear();
      return r;
    }
    case Domain::Kind::PrimeField: return reduce_modular(m);
  }
  return {};
}

std::vector<mpz_class> smith_normal_form(const SparseMatrix& m) {
  if (m.domain().kind() != Domain::Kind::Integers) {
    throw AlgebraError("Smith normal form needs an integer matrix");
  }
  const Reduction r = reduce_integer(m);
  std::vector<mpz_class> out(r.rank - r.torsion.size(), mpz_class(1));
  out.insert(out.end(), r.torsion.begin(), r.torsion.end());
  return out;
}

std::size_t rank(const SparseMatrix& m) { return reduce(m).rank; }

GroupSummand homology_from(std::size_t dimension, const Reduction& incoming, const Reduction& outgoing) {
  if (incoming.rank + outgoing.rank > dimension) {
    throw AlgebraError("differential ranks exceed the chain group dimension");
  }
  GroupSummand g;
  g.free_rank = dimension - incoming.rank - outgoing.rank;
  g.torsion = incoming.torsion;
  return g;
}

GroupSummand homology_at(const SparseMatrix& d_in, const SparseMatrix& d_out) {
  if (!(d_in.domain() == d_out.domain())) throw AlgebraError("differentials over different domains");
  if (d_in.rows() != d_out.cols()) {
    throw AlgebraError("dimension mismatch: d_in has " + std::to_string(d_in.rows()) + " rows but d_out has " +
                       std::to_string(d_out.cols()) + " columns");
  }
  if (!d_out.multiply(d_in).is_zero()) throw AlgebraError("composition d_out * d_in is nonzero");
  return homology_from(d_in.rows(), reduce(d_in), reduce(d_out));
}

}  // namespace khd
