#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "tautring/algebra.hpp"

namespace tautring {

struct RationalField {
  using value_type = Rational;
  static constexpr bool exact = true;

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const { return Rational(static_cast<long>(v)); }
  value_type from_rational(const Rational& q) const { return q; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const { return 1 / a; }
  // acc += c * x
  void axpy(value_type& acc, const value_type& c, const value_type& x) const { acc += c * x; }
  std::string to_string(const value_type& a) const { return rational_to_string(a); }
  value_type parse(const std::string& s) const { return parse_rational(s); }
  Rational to_rational(const value_type& a) const { return a; }
  std::string id() const { return "Q"; }
};

struct PrimeField {
  using value_type = std::uint64_t;
  static constexpr bool exact = false;

  std::uint64_t p;

  explicit PrimeField(std::uint64_t prime) : p(prime) {}

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<value_type>(r < 0 ? r + static_cast<long long>(p) : r);
  }
  value_type from_mpz(const mpz_class& z) const;
  // Throws PreconditionError when p divides the denominator.
  value_type from_rational(const Rational& q) const;
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const {
    value_type s = a + b;
    return s >= p ? s - p : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % p);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type inv(value_type a) const;
  void axpy(value_type& acc, value_type c, value_type x) const { acc = add(acc, mul(c, x)); }
  std::string to_string(value_type a) const { return std::to_string(a); }
  value_type parse(const std::string& s) const;
  // Symmetric lift to an integer.
  Rational to_rational(value_type a) const;
  std::string id() const { return "F_" + std::to_string(p); }
};

bool is_prime_u64(std::uint64_t n);

// Deterministic stream of primes in (2^61, 2^62) drawn from a seeded generator.
class PrimeStream {
 public:
  explicit PrimeStream(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t next();

 private:
  std::mt19937_64 rng_;
};

}  // namespace tautring
