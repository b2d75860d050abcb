#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tautring/algebra.hpp"
#include "tautring/field.hpp"

namespace tautring {

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
using SparseVec = std::vector<std::pair<std::uint32_t, T>>;

// Incremental reduced row echelon form. Every stored row has a unit pivot at
// its smallest column and no entries in any other pivot column.
// The scratch buffers make const methods unsafe to share across threads.
template <class Field>
class Echelon {
 public:
  using T = typename Field::value_type;

  Echelon(Field field, std::size_t ncols)
      : K_(std::move(field)), n_(ncols), row_of_col_(ncols, -1), col_rows_(ncols),
        scratch_(ncols, K_.zero()), mark_(ncols, 0) {}

  const Field& field() const { return K_; }
  std::size_t cols() const { return n_; }
  std::size_t rank() const { return pivots_.size(); }
  bool is_pivot(std::uint32_t c) const { return row_of_col_[c] >= 0; }

  // Entries of the row with pivot c, excluding the pivot itself.
  const SparseVec<T>& tail(std::uint32_t c) const { return tails_[row_of_col_[c]]; }

  std::vector<std::uint32_t> pivots() const {
    std::vector<std::uint32_t> p = pivots_;
    std::sort(p.begin(), p.end());
    return p;
  }

  std::vector<std::uint32_t> free_columns() const {
    std::vector<std::uint32_t> f;
    for (std::uint32_t c = 0; c < n_; ++c)
      if (row_of_col_[c] < 0) f.push_back(c);
    return f;
  }

  SparseVec<T> reduce(const SparseVec<T>& v) const {
    for (const auto& [c, a] : v) {
      if (c >= n_) throw PreconditionError("Echelon::reduce: column out of range");
      if (K_.is_zero(a)) continue;
      int r = row_of_col_[c];
      if (r < 0) {
        touch(c);
        scratch_[c] = K_.add(scratch_[c], a);
      } else {
        T na = K_.neg(a);
        for (const auto& [t, b] : tails_[r]) {
          touch(t);
          K_.axpy(scratch_[t], na, b);
        }
      }
    }
    std::sort(touched_.begin(), touched_.end());
    SparseVec<T> out;
    for (std::uint32_t c : touched_) {
      if (!K_.is_zero(scratch_[c])) out.emplace_back(c, scratch_[c]);
      scratch_[c] = K_.zero();
      mark_[c] = 0;
    }
    touched_.clear();
    return out;
  }

  // Adds v to the row space; returns true when the rank grew.
  bool insert(const SparseVec<T>& v) {
    SparseVec<T> r = reduce(v);
    if (r.empty()) return false;
    add_reduced(std::move(r));
    return true;
  }

  // Adds a vector already reduced against this echelon; returns its pivot.
  std::uint32_t add_reduced(SparseVec<T> r) {
    std::uint32_t p = r.front().first;
    T s = K_.inv(r.front().second);
    SparseVec<T> tail;
    tail.reserve(r.size() - 1);
    for (std::size_t k = 1; k < r.size(); ++k) tail.emplace_back(r[k].first, K_.mul(r[k].second, s));
    for (std::uint32_t id : col_rows_[p]) eliminate(id, p, tail);
    col_rows_[p].clear();
    col_rows_[p].shrink_to_fit();
    auto id = static_cast<std::uint32_t>(tails_.size());
    for (const auto& e : tail) col_rows_[e.first].push_back(id);
    tails_.push_back(std::move(tail));
    row_of_col_[p] = static_cast<std::int32_t>(id);
    pivots_.push_back(p);
    return p;
  }

 private:
  void touch(std::uint32_t c) const {
    if (!mark_[c]) {
      mark_[c] = 1;
      touched_.push_back(c);
    }
  }

  void eliminate(std::uint32_t id, std::uint32_t p, const SparseVec<T>& tail) {
    SparseVec<T>& row = tails_[id];
    auto it = std::lower_bound(row.begin(), row.end(), p,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    if (it == row.end() || it->first != p) return;
    T a = K_.neg(it->second);
    SparseVec<T> out;
    out.reserve(row.size() + tail.size());
    auto x = row.begin();
    auto y = tail.begin();
    while (x != row.end() || y != tail.end()) {
      if (x != row.end() && x->first == p) {
        ++x;
        continue;
      }
      if (y == tail.end() || (x != row.end() && x->first < y->first)) {
        out.push_back(*x++);
      } else if (x == row.end() || y->first < x->first) {
        T v = K_.mul(a, y->second);
        col_rows_[y->first].push_back(id);
        out.emplace_back(y->first, v);
        ++y;
      } else {
        T v = x->second;
        K_.axpy(v, a, y->second);
        if (!K_.is_zero(v)) out.emplace_back(x->first, v);
        ++x;
        ++y;
      }
    }
    row = std::move(out);
  }

  Field K_;
  std::size_t n_;
  std::vector<std::int32_t> row_of_col_;
  std::vector<std::uint32_t> pivots_;
  std::vector<SparseVec<T>> tails_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  mutable std::vector<T> scratch_;
  mutable std::vector<char> mark_;
  mutable std::vector<std::uint32_t> touched_;
};

// ------------------------------------------------ rational matrix interface

struct SparseMatrix {
  std::size_t ncols = 0;
  std::vector<SparseVec<Rational>> rows;

  SparseMatrix() = default;
  explicit SparseMatrix(std::size_t cols) : ncols(cols) {}
  void add_row(SparseVec<Rational> r);
  std::size_t nnz() const;
};

enum class LinalgPolicy { Exact, Modular, Auto };

LinalgPolicy parse_policy(const std::string& s);
std::string to_string(LinalgPolicy p);

struct RankCertificate {
  std::string method;  // "exact" or "modular"
  std::vector<std::uint64_t> primes;
  std::vector<std::size_t> ranks;
  bool verified = false;
};

struct LinalgOptions {
  LinalgPolicy policy = LinalgPolicy::Auto;
  std::uint64_t prime_seed = 0x7a75ull;
  std::size_t auto_threshold = 50000;  // nonzero entries
  std::size_t max_primes = 8;
  std::vector<std::uint64_t> primes;  // tried before the seeded stream
};

struct RankResult {
  std::size_t rank = 0;
  RankCertificate certificate;
};

struct RrefResult {
  std::size_t ncols = 0;
  std::vector<std::uint32_t> pivots;          // ascending
  std::vector<SparseVec<Rational>> rows;      // row k has pivot pivots[k] with coefficient 1
  RankCertificate certificate;
};

RankResult rank(const SparseMatrix& m, const LinalgOptions& opts = {});
RrefResult rref(const SparseMatrix& m, const LinalgOptions& opts = {});
// Residual of v against the row space; zero exactly when v lies in it.
SparseVec<Rational> reduce_against(const RrefResult& basis, const SparseVec<Rational>& v);

// Building blocks, exposed for tests.
std::size_t rank_fraction_free(const SparseMatrix& m);
std::size_t rank_mod_p(const SparseMatrix& m, std::uint64_t p);
std::optional<Rational> rational_reconstruct(const mpz_class& a, const mpz_class& modulus);

}  // namespace tautring
