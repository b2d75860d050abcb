#include <random>

#include "doctest.h"
#include "tautring/linalg.hpp"

using namespace tautring;

namespace {

// Product of random (rows x k) and (k x cols) integer matrices, so the rank
// is at most k; some entries get small denominators.
SparseMatrix planted(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t k, double density) {
  std::uniform_int_distribution<int> val(-4, 4);
  std::bernoulli_distribution keep(density);
  std::vector<std::vector<long>> A(rows, std::vector<long>(k)), B(k, std::vector<long>(cols));
  for (auto& r : A)
    for (auto& x : r) x = keep(rng) ? val(rng) : 0;
  for (auto& r : B)
    for (auto& x : r) x = keep(rng) ? val(rng) : 0;
  SparseMatrix m(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    SparseVec<Rational> row;
    long den = 1 + static_cast<long>(rng() % 3);
    for (std::size_t j = 0; j < cols; ++j) {
      long s = 0;
      for (std::size_t t = 0; t < k; ++t) s += A[i][t] * B[t][j];
      if (s) row.emplace_back(static_cast<std::uint32_t>(j), Rational(s, den));
    }
    m.add_row(row);
  }
  return m;
}

// Gaussian elimination on a dense rational copy, the textbook way.
std::size_t dense_rank(const SparseMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows.size(), std::vector<Rational>(m.ncols, 0));
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (const auto& [c, v] : m.rows[i]) a[i][c] = v;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.ncols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < m.ncols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("prime stream") {
  PrimeStream a(42), b(42);
  for (int k = 0; k < 5; ++k) {
    auto p = a.next();
    CHECK(p == b.next());
    CHECK(p > (1ull << 61));
    CHECK(p < (1ull << 62));
    CHECK(is_prime_u64(p));
  }
  CHECK(is_prime_u64(2305843009213693951ull));  // 2^61 - 1
  CHECK_FALSE(is_prime_u64(2305843009213693953ull));
}

TEST_CASE("prime field arithmetic") {
  PrimeField K(2305843009213693951ull);
  auto a = K.from_rational(Rational(3, 7));
  CHECK(K.mul(a, K.from_int(7)) == 3);
  CHECK(K.add(K.from_int(-1), K.one()) == 0);
  CHECK(K.to_rational(K.from_int(-5)) == -5);
  CHECK_THROWS_AS(K.inv(0), PreconditionError);
}

TEST_CASE("rank agrees across methods") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t rows = 1 + rng() % 25, cols = 1 + rng() % 25, k = rng() % 12;
    auto m = planted(rng, rows, cols, k, 0.5);
    std::size_t r = dense_rank(m);
    CHECK(rank_fraction_free(m) == r);
    LinalgOptions modular;
    modular.policy = LinalgPolicy::Modular;
    auto res = rank(m, modular);
    CHECK(res.rank == r);
    CHECK(res.certificate.verified);
    CHECK(res.certificate.primes.size() >= 2);
    LinalgOptions exact;
    exact.policy = LinalgPolicy::Exact;
    CHECK(rank(m, exact).rank == r);
  }
}

TEST_CASE("unlucky prime forces escalation") {
  PrimeStream s(9);
  std::uint64_t p0 = s.next(), p1 = s.next(), p2 = s.next();
  SparseMatrix m(2);
  m.add_row({{0, Rational(mpz_class(std::to_string(p0)))}, {1, Rational(1)}});
  m.add_row({{1, Rational(1)}});
  CHECK(rank_mod_p(m, p0) == 1);
  LinalgOptions opts;
  opts.policy = LinalgPolicy::Modular;
  opts.primes = {p0, p1, p2};
  auto res = rank(m, opts);
  CHECK(res.rank == 2);
  CHECK(res.certificate.primes.size() == 3);
  CHECK(res.certificate.ranks == std::vector<std::size_t>{1, 2, 2});
}

TEST_CASE("rref is reduced, idempotent and reproduces the rows") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    auto m = planted(rng, 1 + rng() % 15, 1 + rng() % 15, rng() % 8, 0.6);
    for (auto policy : {LinalgPolicy::Exact, LinalgPolicy::Modular}) {
      LinalgOptions opts;
      opts.policy = policy;
      auto R = rref(m, opts);
      CHECK(R.pivots.size() == dense_rank(m));
      for (std::size_t k = 0; k < R.pivots.size(); ++k) {
        REQUIRE(!R.rows[k].empty());
        CHECK(R.rows[k].front().first == R.pivots[k]);
        CHECK(R.rows[k].front().second == 1);
        for (std::size_t l = 0; l < R.pivots.size(); ++l)
          for (const auto& [c, v] : R.rows[k])
            if (l != k) CHECK(c != R.pivots[l]);
      }
      SparseMatrix again(m.ncols);
      for (const auto& r : R.rows) again.add_row(r);
      auto R2 = rref(again, opts);
      CHECK(R2.pivots == R.pivots);
      CHECK(R2.rows == R.rows);
      for (const auto& r : m.rows) CHECK(reduce_against(R, r).empty());
    }
  }
}

TEST_CASE("reduce_against reassembly") {
  std::mt19937_64 rng(5);
  auto m = planted(rng, 6, 10, 4, 0.7);
  auto R = rref(m);
  SparseVec<Rational> v{{1, Rational(2, 3)}, {4, Rational(-1)}, {9, Rational(5)}};
  auto res = reduce_against(R, v);
  // v - residual lies in the row space: sum of pivot coefficients times rows.
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [c, q] : v) acc[c] += q;
  for (const auto& [c, q] : res) acc[c] -= q;
  for (std::size_t k = 0; k < R.pivots.size(); ++k) {
    Rational a = acc.count(R.pivots[k]) ? acc[R.pivots[k]] : Rational(0);
    for (const auto& [c, q] : R.rows[k]) acc[c] -= a * q;
  }
  for (const auto& [c, q] : acc) CHECK(q == 0);
  for (const auto& [c, q] : res)
    for (auto p : R.pivots) CHECK(c != p);
  SparseVec<Rational> bad{{10, Rational(1)}};
  CHECK_THROWS_AS(reduce_against(R, bad), InputError);
}

TEST_CASE("rational reconstruction") {
  mpz_class M = mpz_class("2305843009213693951") * mpz_class("2305843009213693921");
  for (auto q : {Rational(3, 7), Rational(-22, 5), Rational(0), Rational(123456789, 1000)}) {
    mpz_class a = q.get_num() * 1;
    mpz_class inv;
    mpz_class den = q.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
    a = (a * inv) % M;
    if (a < 0) a += M;
    auto r = rational_reconstruct(a, M);
    REQUIRE(r.has_value());
    CHECK(*r == q);
  }
}
