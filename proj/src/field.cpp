#include "tautring/field.hpp"

namespace tautring {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

PrimeField::value_type PrimeField::from_mpz(const mpz_class& z) const {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return r.get_ui();
}

PrimeField::value_type PrimeField::from_rational(const Rational& q) const {
  value_type d = from_mpz(q.get_den());
  if (d == 0) throw PreconditionError("prime divides a denominator");
  return mul(from_mpz(q.get_num()), inv(d));
}

PrimeField::value_type PrimeField::inv(value_type a) const {
  if (a == 0) throw PreconditionError("inverse of zero");
  return powmod(a, p - 2, p);
}

PrimeField::value_type PrimeField::parse(const std::string& s) const {
  return from_rational(parse_rational(s));
}

Rational PrimeField::to_rational(value_type a) const {
  if (a > p / 2) return -Rational(mpz_class(std::to_string(p - a)));
  return Rational(mpz_class(std::to_string(a)));
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all 64-bit n.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t PrimeStream::next() {
  constexpr std::uint64_t lo = 1ull << 61;
  while (true) {
    std::uint64_t c = lo | (rng_() & (lo - 1)) | 1ull;
    if (is_prime_u64(c)) return c;
  }
}

}  // namespace tautring
