#include "tautring/linalg.hpp"

#include <map>
#include <optional>

namespace tautring {

void SparseMatrix::add_row(SparseVec<Rational> r) {
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec<Rational> merged;
  for (auto& [c, v] : r) {
    if (c >= ncols) throw InputError("matrix entry column " + std::to_string(c) + " out of range");
    if (!merged.empty() && merged.back().first == c) {
      merged.back().second += v;
    } else {
      merged.emplace_back(c, v);
    }
  }
  std::erase_if(merged, [](const auto& e) { return sgn(e.second) == 0; });
  rows.push_back(std::move(merged));
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

LinalgPolicy parse_policy(const std::string& s) {
  if (s == "exact") return LinalgPolicy::Exact;
  if (s == "modular") return LinalgPolicy::Modular;
  if (s == "auto") return LinalgPolicy::Auto;
  throw InputError("unknown linear algebra policy '" + s + "'");
}

std::string to_string(LinalgPolicy p) {
  switch (p) {
    case LinalgPolicy::Exact: return "exact";
    case LinalgPolicy::Modular: return "modular";
    case LinalgPolicy::Auto: return "auto";
  }
  return "auto";
}

namespace {

using IntRow = std::vector<std::pair<std::uint32_t, mpz_class>>;

IntRow integer_row(const SparseVec<Rational>& r) {
  mpz_class l = 1;
  for (const auto& e : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
  IntRow out;
  for (const auto& [c, v] : r) out.emplace_back(c, mpz_class(v.get_num() * (l / v.get_den())));
  return out;
}

void remove_content(IntRow& r) {
  mpz_class g = 0;
  for (const auto& e : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
  if (g > 1)
    for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

bool usable_prime(const SparseMatrix& m, std::uint64_t p) {
  for (const auto& r : m.rows)
    for (const auto& e : r)
      if (mpz_divisible_ui_p(e.second.get_den_mpz_t(), p)) return false;
  return true;
}

Echelon<PrimeField> echelon_mod_p(const SparseMatrix& m, std::uint64_t p) {
  PrimeField K(p);
  Echelon<PrimeField> e(K, m.ncols);
  for (const auto& r : m.rows) {
    SparseVec<std::uint64_t> v;
    v.reserve(r.size());
    for (const auto& [c, q] : r) {
      auto x = K.from_rational(q);
      if (x) v.emplace_back(c, x);
    }
    e.insert(v);
  }
  return e;
}

class PrimeSource {
 public:
  explicit PrimeSource(const LinalgOptions& o) : fixed_(o.primes), stream_(o.prime_seed) {}
  std::uint64_t next() { return pos_ < fixed_.size() ? fixed_[pos_++] : stream_.next(); }

 private:
  std::vector<std::uint64_t> fixed_;
  std::size_t pos_ = 0;
  PrimeStream stream_;
};

bool use_exact(const SparseMatrix& m, const LinalgOptions& opts) {
  if (opts.policy == LinalgPolicy::Exact) return true;
  if (opts.policy == LinalgPolicy::Modular) return false;
  return m.nnz() <= opts.auto_threshold;
}

RrefResult rref_exact(const SparseMatrix& m) {
  Echelon<RationalField> e(RationalField{}, m.ncols);
  for (const auto& r : m.rows) e.insert(r);
  RrefResult out;
  out.ncols = m.ncols;
  out.pivots = e.pivots();
  for (auto p : out.pivots) {
    SparseVec<Rational> row{{p, Rational(1)}};
    for (const auto& t : e.tail(p)) row.push_back(t);
    out.rows.push_back(std::move(row));
  }
  out.certificate = {"exact", {}, {out.pivots.size()}, true};
  return out;
}

}  // namespace

std::size_t rank_fraction_free(const SparseMatrix& m) {
  // Integer rows in semi-echelon form keyed by leading column; every update
  // is a cross multiplication followed by removal of the row content.
  std::map<std::uint32_t, IntRow> basis;
  for (const auto& r : m.rows) {
    IntRow v = integer_row(r);
    while (!v.empty()) {
      auto it = basis.find(v.front().first);
      if (it == basis.end()) break;
      const IntRow& b = it->second;
      mpz_class a = v.front().second, s = b.front().second;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), s.get_mpz_t());
      a /= g;
      s /= g;
      IntRow out;
      auto x = v.cbegin();
      auto y = b.cbegin();
      while (x != v.cend() || y != b.cend()) {
        if (y == b.end() || (x != v.end() && x->first < y->first)) {
          out.emplace_back(x->first, s * x->second);
          ++x;
        } else if (x == v.end() || y->first < x->first) {
          out.emplace_back(y->first, -a * y->second);
          ++y;
        } else {
          mpz_class t = s * x->second - a * y->second;
          if (t != 0) out.emplace_back(x->first, std::move(t));
          ++x;
          ++y;
        }
      }
      remove_content(out);
      v = std::move(out);
    }
    if (!v.empty()) basis.emplace(v.front().first, std::move(v));
  }
  return basis.size();
}

std::size_t rank_mod_p(const SparseMatrix& m, std::uint64_t p) {
  if (!usable_prime(m, p)) throw PreconditionError("prime divides a denominator");
  return echelon_mod_p(m, p).rank();
}

RankResult rank(const SparseMatrix& m, const LinalgOptions& opts) {
  RankResult out;
  if (use_exact(m, opts)) {
    out.rank = rank_fraction_free(m);
    out.certificate = {"exact", {}, {out.rank}, true};
    return out;
  }
  // rank mod p never exceeds the rational rank, so the maximum seen is the
  // best lower bound; it is accepted once two primes reproduce it.
  PrimeSource primes(opts);
  out.certificate.method = "modular";
  while (out.certificate.primes.size() < opts.max_primes) {
    std::uint64_t p = primes.next();
    if (!usable_prime(m, p)) continue;
    std::size_t r = echelon_mod_p(m, p).rank();
    out.certificate.primes.push_back(p);
    out.certificate.ranks.push_back(r);
    std::size_t best = *std::max_element(out.certificate.ranks.begin(), out.certificate.ranks.end());
    auto hits = std::count(out.certificate.ranks.begin(), out.certificate.ranks.end(), best);
    if (hits >= 2) {
      out.rank = best;
      out.certificate.verified = true;
      return out;
    }
  }
  throw IntegrityError("modular rank did not stabilise within " +
                       std::to_string(opts.max_primes) + " primes");
}

std::optional<Rational> rational_reconstruct(const mpz_class& a, const mpz_class& modulus) {
  // Extended Euclid stopped at the balanced bound sqrt(modulus / 2).
  mpz_class bound;
  mpz_class half = modulus / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = modulus, r1 = a % modulus;
  if (r1 < 0) r1 += modulus;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class gcd;
  mpz_gcd(gcd.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (gcd != 1) return std::nullopt;
  Rational q(r1, t1);
  q.canonicalize();
  return q;
}

RrefResult rref(const SparseMatrix& m, const LinalgOptions& opts) {
  if (use_exact(m, opts)) return rref_exact(m);

  PrimeSource primes(opts);
  RrefResult out;
  out.ncols = m.ncols;
  out.certificate.method = "modular";
  std::vector<std::uint32_t> pivots;
  bool have_pivots = false;
  // Residues of every tail entry, aligned across primes with the same pivots.
  std::map<std::pair<std::uint32_t, std::uint32_t>, mpz_class> crt;
  mpz_class modulus = 1;
  while (out.certificate.primes.size() < opts.max_primes) {
    std::uint64_t p = primes.next();
    if (!usable_prime(m, p)) continue;
    auto e = echelon_mod_p(m, p);
    out.certificate.primes.push_back(p);
    out.certificate.ranks.push_back(e.rank());
    auto piv = e.pivots();
    // Unlucky primes lose rank or push pivots to later columns.
    bool better = !have_pivots || piv.size() > pivots.size() ||
                  (piv.size() == pivots.size() && piv < pivots);
    if (better) {
      have_pivots = true;
      pivots = piv;
      crt.clear();
      modulus = 1;
    } else if (piv != pivots) {
      continue;
    }
    mpz_class mp(std::to_string(p));
    std::map<std::pair<std::uint32_t, std::uint32_t>, mpz_class> next;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> res;
    for (std::size_t k = 0; k < pivots.size(); ++k)
      for (const auto& [c, v] : e.tail(pivots[k])) res[{static_cast<std::uint32_t>(k), c}] = v;
    for (const auto& [key, v] : crt) res.emplace(key, 0);
    for (const auto& [key, v] : res) {
      mpz_class old = crt.count(key) ? crt[key] : mpz_class(0);
      // x = old + modulus * ((v - old) * modulus^{-1} mod p)
      mpz_class inv, diff = mpz_class(std::to_string(v)) - old;
      mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), mp.get_mpz_t());
      mpz_class t = (diff * inv) % mp;
      if (t < 0) t += mp;
      next[key] = old + modulus * t;
    }
    crt = std::move(next);
    modulus *= mp;

    RrefResult cand;
    cand.ncols = m.ncols;
    cand.pivots = pivots;
    cand.rows.resize(pivots.size());
    bool ok = true;
    for (std::size_t k = 0; k < pivots.size(); ++k) cand.rows[k].emplace_back(pivots[k], Rational(1));
    for (const auto& [key, v] : crt) {
      if (v == 0) continue;
      auto q = rational_reconstruct(v, modulus);
      if (!q) {
        ok = false;
        break;
      }
      cand.rows[key.first].emplace_back(key.second, *q);
    }
    if (!ok) continue;
    bool verified = true;
    for (const auto& r : m.rows)
      if (!reduce_against(cand, r).empty()) {
        verified = false;
        break;
      }
    if (verified) {
      cand.certificate = out.certificate;
      cand.certificate.verified = true;
      return cand;
    }
  }
  throw IntegrityError("rational reconstruction of the echelon form failed within " +
                       std::to_string(opts.max_primes) + " primes");
}

SparseVec<Rational> reduce_against(const RrefResult& basis, const SparseVec<Rational>& v) {
  for (const auto& e : v)
    if (e.first >= basis.ncols)
      throw InputError("vector has column " + std::to_string(e.first) + " but basis has " +
                       std::to_string(basis.ncols) + " columns");
  std::map<std::uint32_t, Rational> acc;
  for (const auto& [c, q] : v)
    if (sgn(q) != 0) acc[c] += q;
  for (std::size_t k = 0; k < basis.pivots.size(); ++k) {
    auto it = acc.find(basis.pivots[k]);
    if (it == acc.end() || sgn(it->second) == 0) continue;
    Rational a = it->second;
    for (const auto& [c, q] : basis.rows[k]) acc[c] -= a * q;
  }
  SparseVec<Rational> out;
  for (auto& [c, q] : acc)
    if (sgn(q) != 0) out.emplace_back(c, q);
  return out;
}

}  // namespace tautring
