#include "tautring/pushforward.hpp"

#include <functional>

namespace tautring {

KappaMonomial KappaMonomial::psi(unsigned e) {
  KappaMonomial m;
  m.exps_ = {static_cast<std::uint16_t>(e)};
  m.trim();
  return m;
}

KappaMonomial KappaMonomial::kappa(int i, unsigned e) {
  if (i < 1) throw PreconditionError("kappa index must be positive");
  KappaMonomial m;
  m.exps_.assign(i + 1, 0);
  m.exps_[i] = static_cast<std::uint16_t>(e);
  m.trim();
  return m;
}

unsigned KappaMonomial::kappa_exponent(int i) const {
  return (i >= 1 && i < static_cast<int>(exps_.size())) ? exps_[i] : 0;
}

int KappaMonomial::degree() const {
  int d = psi_exponent();
  for (std::size_t i = 1; i < exps_.size(); ++i) d += static_cast<int>(i) * exps_[i];
  return d;
}

KappaMonomial KappaMonomial::operator*(const KappaMonomial& o) const {
  KappaMonomial m;
  m.exps_.assign(std::max(exps_.size(), o.exps_.size()), 0);
  for (std::size_t i = 0; i < exps_.size(); ++i) m.exps_[i] += exps_[i];
  for (std::size_t i = 0; i < o.exps_.size(); ++i) m.exps_[i] += o.exps_[i];
  return m;
}

KappaMonomial KappaMonomial::without_psi() const {
  KappaMonomial m = *this;
  if (!m.exps_.empty()) m.exps_[0] = 0;
  m.trim();
  return m;
}

bool KappaMonomial::operator<(const KappaMonomial& o) const {
  int a = degree(), b = o.degree();
  if (a != b) return a < b;
  std::size_t n = std::max(exps_.size(), o.exps_.size());
  for (std::size_t i = 0; i < n; ++i) {
    unsigned x = i < exps_.size() ? exps_[i] : 0;
    unsigned y = i < o.exps_.size() ? o.exps_[i] : 0;
    if (x != y) return x < y;
  }
  return false;
}

std::string KappaMonomial::to_string() const {
  if (exps_.empty()) return "1";
  std::string out;
  auto put = [&](const std::string& name, unsigned e) {
    if (!e) return;
    if (!out.empty()) out += "*";
    out += name;
    if (e > 1) out += "^" + std::to_string(e);
  };
  for (std::size_t i = 1; i < exps_.size(); ++i) put("kappa[" + std::to_string(i) + "]", exps_[i]);
  put("psi", psi_exponent());
  return out;
}

void KappaMonomial::trim() {
  while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
}

std::size_t KappaMonomialHash::operator()(const KappaMonomial& m) const {
  std::size_t h = 1469598103934665603ull;
  for (auto e : m.exponents()) {
    h ^= e;
    h *= 1099511628211ull;
  }
  return h;
}

KappaPolynomial KappaPolynomial::constant(const Rational& c) { return term(KappaMonomial(), c); }

KappaPolynomial KappaPolynomial::term(const KappaMonomial& m, const Rational& c) {
  KappaPolynomial p;
  p.add_term(m, c);
  return p;
}

Rational KappaPolynomial::coefficient(const KappaMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void KappaPolynomial::add_term(const KappaMonomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  Rational v = c;
  v.canonicalize();
  auto [it, inserted] = terms_.emplace(m, v);
  if (!inserted) {
    it->second += v;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void KappaPolynomial::add_scaled(const KappaPolynomial& p, const Rational& c) {
  for (const auto& [m, a] : p.terms_) add_term(m, a * c);
}

KappaPolynomial KappaPolynomial::operator+(const KappaPolynomial& o) const {
  KappaPolynomial r = *this;
  r.add_scaled(o, 1);
  return r;
}

KappaPolynomial KappaPolynomial::operator-(const KappaPolynomial& o) const {
  KappaPolynomial r = *this;
  r.add_scaled(o, -1);
  return r;
}

KappaPolynomial KappaPolynomial::operator*(const KappaPolynomial& o) const {
  KappaPolynomial r;
  for (const auto& [a, x] : terms_)
    for (const auto& [b, y] : o.terms_) r.add_term(a * b, x * y);
  return r;
}

std::string KappaPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += rational_to_string(c);
    if (!m.is_unit()) out += "*" + m.to_string();
  }
  return out;
}

namespace {

Rational pow2(int e) {
  mpz_class z = 1;
  z <<= e;
  return Rational(z);
}

// kappa_j with kappa_0 = 2g - 2 and kappa_{-1} = 0.
KappaPolynomial kappa_symbol(int g, int j) {
  if (j < 0) return {};
  if (j == 0) return KappaPolynomial::constant(2 * g - 2);
  return KappaPolynomial::term(KappaMonomial::kappa(j));
}

}  // namespace

KappaPolynomial p_to_kappa(const AlgebraContext& ctx, const Polynomial& p) {
  const int g = ctx.genus();
  std::map<VarIndex, KappaPolynomial> image;
  for (VarIndex v = 0; v < ctx.variable_count(); ++v) {
    if (!ctx.is_column0(v)) continue;
    if (v == ctx.y_index()) {
      image[v] = KappaPolynomial::term(KappaMonomial::psi());
      continue;
    }
    int i = ctx.bidegree(v).j / 2;
    KappaPolynomial q = KappaPolynomial::term(KappaMonomial::psi(i));
    for (int j = 0; j <= i; ++j) {
      KappaPolynomial t = KappaPolynomial::term(KappaMonomial::psi(i - j)) * kappa_symbol(g, j);
      q.add_scaled(t, binomial(i + 1, j + 1) / pow2(i + 1));
    }
    image[v] = q;
  }
  KappaPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    KappaPolynomial t = KappaPolynomial::constant(c);
    for (auto [v, e] : m.factors()) {
      auto it = image.find(v);
      if (it == image.end()) throw InputError("p_to_kappa: " + ctx.variable(v).to_string() + " is not in column zero");
      for (unsigned k = 0; k < e; ++k) t = t * it->second;
    }
    out.add_scaled(t, 1);
  }
  return out;
}

Polynomial kappa_to_p(const AlgebraContext& ctx, const KappaPolynomial& q) {
  const int g = ctx.genus();
  int top = 0;
  for (const auto& [m, c] : q.terms()) top = std::max(top, m.max_kappa());
  // kappa_i = 2^(i+1) (x[0,2i] - y^i) - sum_{j<i} C(i+1, j+1) y^(i-j) kappa_j
  std::vector<Polynomial> kap(top + 1);
  kap[0] = Polynomial::constant(2 * g - 2);
  auto ypow = [&](int e) { return Polynomial::term(ctx.var_power(ctx.y_index(), static_cast<unsigned>(e))); };
  for (int i = 1; i <= top; ++i) {
    Polynomial k = (ctx.x(0, 2 * i) - ypow(i)).scaled(pow2(i + 1));
    for (int j = 0; j < i; ++j) k.add_scaled(ypow(i - j) * kap[j], -binomial(i + 1, j + 1));
    kap[i] = std::move(k);
  }
  Polynomial out;
  for (const auto& [m, c] : q.terms()) {
    Polynomial t = Polynomial::constant(c);
    if (m.psi_exponent()) t = t.times(ctx.var_power(ctx.y_index(), m.psi_exponent()));
    for (int i = 1; i <= m.max_kappa(); ++i)
      for (unsigned k = 0; k < m.kappa_exponent(i); ++k) t = t * kap[i];
    out.add_scaled(t, 1);
  }
  return out;
}

KappaPolynomial qstar_pushforward(int genus, const KappaPolynomial& q) {
  KappaPolynomial out;
  for (const auto& [m, c] : q.terms()) {
    unsigned s = m.psi_exponent();
    if (s == 0) continue;
    KappaPolynomial rest = KappaPolynomial::term(m.without_psi(), c);
    out.add_scaled(rest * kappa_symbol(genus, static_cast<int>(s) - 1), 1);
  }
  return out;
}

std::vector<KappaMonomial> kappa_monomials(int d, int max_kappa, bool with_psi) {
  std::vector<KappaMonomial> out;
  std::function<void(int, int, KappaMonomial)> rec = [&](int i, int left, KappaMonomial m) {
    if (i == 0) {
      if (with_psi) out.push_back(m * KappaMonomial::psi(static_cast<unsigned>(left)));
      else if (left == 0) out.push_back(m);
      return;
    }
    for (int e = 0; e * i <= left; ++e) {
      KappaMonomial next = e ? m * KappaMonomial::kappa(i, static_cast<unsigned>(e)) : m;
      rec(i - 1, left - e * i, next);
    }
  };
  if (d >= 0) rec(std::min(max_kappa, d), d, KappaMonomial());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tautring
