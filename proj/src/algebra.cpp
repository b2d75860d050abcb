#include "tautring/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tautring {

std::string rational_to_string(const Rational& q) { return q.get_str(10); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t k = (t[0] == '-') ? 1 : 0;
    if (k == t.size()) return false;
    for (; k < t.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(t[k]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-')
    throw InputError("malformed rational: '" + s + "'");
  mpz_class d(den);
  if (d == 0) throw InputError("zero denominator in '" + s + "'");
  Rational q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

Rational binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Rational(r);
}

std::string Bidegree::to_string() const {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string VariableId::to_string() const {
  if (kind == Kind::Y) return "y";
  return "x[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(FactorList factors, Bidegree b)
    : factors_(std::move(factors)), bidegree_(b) {
  rehash();
}

void Monomial::rehash() {
  std::size_t h = 1469598103934665603ull;
  for (auto [v, e] : factors_) {
    h ^= (static_cast<std::size_t>(v) << 16) | e;
    h *= 1099511628211ull;
  }
  hash_ = h;
}

unsigned Monomial::exponent(VarIndex v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{v, 0});
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto& f : factors_) d += f.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  FactorList out;
  out.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      out.emplace_back(a->first, static_cast<std::uint16_t>(a->second + b->second));
      ++a;
      ++b;
    }
  }
  return Monomial(std::move(out), bidegree_ + o.bidegree_);
}

bool Monomial::divides(const Monomial& o) const {
  for (auto [v, e] : factors_)
    if (o.exponent(v) < e) return false;
  return true;
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  int ca = a.codim(), cb = b.codim();
  if (ca != cb) return ca < cb ? -1 : 1;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t p = 0, q = 0;
  while (p < fa.size() && q < fb.size()) {
    if (fa[p].first == fb[q].first) {
      if (fa[p].second != fb[q].second) return fa[p].second < fb[q].second ? -1 : 1;
      ++p;
      ++q;
    } else {
      // The side holding the earlier variable has the larger exponent there.
      return fa[p].first < fb[q].first ? 1 : -1;
    }
  }
  if (p < fa.size()) return 1;
  if (q < fb.size()) return -1;
  return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(const Rational& c) { return term(Monomial(), c); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  Rational v = c;
  v.canonicalize();
  auto [it, inserted] = terms_.emplace(m, v);
  if (!inserted) {
    it->second += v;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void Polynomial::add_scaled(const Polynomial& p, const Rational& c) {
  if (sgn(c) == 0) return;
  for (const auto& [m, a] : p.terms_) add_term(m, a * c);
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial r;
  r.add_scaled(*this, c);
  return r;
}

Polynomial Polynomial::times(const Monomial& m) const {
  Polynomial r;
  for (const auto& [t, a] : terms_) r.terms_.emplace(t * m, a);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r.add_scaled(o, 1);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  r.add_scaled(o, -1);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, a] : terms_)
    for (const auto& [m2, b] : o.terms_) r.add_term(m1 * m2, a * b);
  return r;
}

std::optional<Bidegree> Polynomial::homogeneous_bidegree() const {
  if (terms_.empty()) return std::nullopt;
  Bidegree b = terms_.begin()->first.bidegree();
  for (const auto& [m, c] : terms_)
    if (m.bidegree() != b) return std::nullopt;
  return b;
}

std::map<Bidegree, Polynomial> Polynomial::components() const {
  std::map<Bidegree, Polynomial> out;
  for (const auto& [m, c] : terms_) out[m.bidegree()].terms_.emplace(m, c);
  return out;
}

// ---------------------------------------------------------- AlgebraContext

AlgebraContext::AlgebraContext(int genus) : g_(genus) {
  x_rows_ = 2 * genus - 1;
  x_cols_ = 2 * genus + 1;
  x_lookup_.assign(static_cast<std::size_t>(x_rows_) * x_cols_, -1);
  for (int j = 0; j <= 2 * genus - 2; ++j) {
    for (int i = j % 2; i <= j + 2; i += 2) {
      if (i == 0 && j == 0) continue;
      x_lookup_[static_cast<std::size_t>(j) * x_cols_ + i] = static_cast<std::int32_t>(vars_.size());
      vars_.push_back(VariableId::x(i, j));
    }
  }
  vars_.push_back(VariableId::y());
  x20_ = *x_index(2, 0);
}

std::shared_ptr<const AlgebraContext> AlgebraContext::make(int genus) {
  if (genus < 1) throw InputError("genus must be at least 1, got " + std::to_string(genus));
  if (genus > 60) throw InputError("genus " + std::to_string(genus) + " is out of range");
  return std::shared_ptr<const AlgebraContext>(new AlgebraContext(genus));
}

std::optional<VarIndex> AlgebraContext::index_of(const VariableId& v) const {
  if (v.kind == VariableId::Kind::Y) return y_index();
  return x_index(v.i, v.j);
}

std::optional<VarIndex> AlgebraContext::x_index(int i, int j) const {
  if (i < 0 || j < 0 || j >= x_rows_ || i >= x_cols_) return std::nullopt;
  std::int32_t k = x_lookup_[static_cast<std::size_t>(j) * x_cols_ + i];
  if (k < 0) return std::nullopt;
  return static_cast<VarIndex>(k);
}

Monomial AlgebraContext::var_power(VarIndex v, unsigned e) const {
  if (e == 0) return unit();
  Bidegree b = bidegree(v);
  return Monomial({{v, static_cast<std::uint16_t>(e)}},
                  {b.i * static_cast<int>(e), b.j * static_cast<int>(e)});
}

Monomial AlgebraContext::monomial(
    const std::vector<std::pair<VariableId, unsigned>>& f) const {
  Monomial m;
  for (const auto& [v, e] : f) {
    auto idx = index_of(v);
    if (!idx) throw InputError("unknown variable " + v.to_string());
    m = m * var_power(*idx, e);
  }
  return m;
}

Monomial AlgebraContext::divide(const Monomial& m, VarIndex v) const {
  Monomial::FactorList out;
  out.reserve(m.factors().size());
  bool found = false;
  for (auto [w, e] : m.factors()) {
    if (w == v) {
      found = true;
      if (e > 1) out.emplace_back(w, static_cast<std::uint16_t>(e - 1));
    } else {
      out.emplace_back(w, e);
    }
  }
  if (!found) throw PreconditionError("divide: variable does not divide monomial");
  return Monomial(std::move(out), m.bidegree() - bidegree(v));
}

Monomial AlgebraContext::divide(const Monomial& m, const Monomial& d) const {
  Monomial::FactorList out;
  for (auto [w, e] : m.factors()) {
    unsigned k = d.exponent(w);
    if (k > e) throw PreconditionError("divide: monomial does not divide");
    if (e > k) out.emplace_back(w, static_cast<std::uint16_t>(e - k));
  }
  if (!d.divides(m)) throw PreconditionError("divide: monomial does not divide");
  return Monomial(std::move(out), m.bidegree() - d.bidegree());
}

Polynomial AlgebraContext::x(int a, int b) const {
  if (a == 0 && b == 0) return Polynomial::constant(g_);
  auto idx = x_index(a, b);
  if (!idx) return {};
  return Polynomial::term(var(*idx));
}

namespace {

struct Enumerator {
  const AlgebraContext& ctx;
  std::vector<VarIndex> allowed;
  int max_i, max_j;
  // feasible[k][ri][rj]: some monomial in allowed[k..] has bidegree (ri, rj)
  std::vector<std::vector<std::vector<char>>> feasible;

  Enumerator(const AlgebraContext& c, Bidegree b,
             const std::function<bool(VarIndex)>& exclude)
      : ctx(c), max_i(b.i), max_j(b.j) {
    for (VarIndex v = 0; v < ctx.variable_count(); ++v) {
      Bidegree vb = ctx.bidegree(v);
      if (vb.i > b.i || vb.j > b.j) continue;
      if (exclude && exclude(v)) continue;
      allowed.push_back(v);
    }
    std::size_t n = allowed.size();
    feasible.assign(n + 1, std::vector<std::vector<char>>(
                               max_i + 1, std::vector<char>(max_j + 1, 0)));
    feasible[n][0][0] = 1;
    for (std::size_t k = n; k-- > 0;) {
      Bidegree vb = ctx.bidegree(allowed[k]);
      for (int ri = 0; ri <= max_i; ++ri)
        for (int rj = 0; rj <= max_j; ++rj) {
          char f = feasible[k + 1][ri][rj];
          if (!f && ri >= vb.i && rj >= vb.j) f = feasible[k][ri - vb.i][rj - vb.j];
          feasible[k][ri][rj] = f;
        }
    }
  }

  template <class Visit>
  void run(std::size_t k, int ri, int rj, Monomial::FactorList& cur,
           Visit& visit) {
    if (k == allowed.size()) {
      visit(cur);
      return;
    }
    Bidegree vb = ctx.bidegree(allowed[k]);
    int e = 0;
    int si = ri, sj = rj;
    while (si >= 0 && sj >= 0) {
      if (feasible[k + 1][si][sj]) {
        if (e > 0) cur.emplace_back(allowed[k], static_cast<std::uint16_t>(e));
        run(k + 1, si, sj, cur, visit);
        if (e > 0) cur.pop_back();
      }
      ++e;
      si -= vb.i;
      sj -= vb.j;
    }
  }

  std::size_t count(std::size_t k, int ri, int rj,
                    std::map<std::tuple<std::size_t, int, int>, std::size_t>& memo) {
    if (k == allowed.size()) return (ri == 0 && rj == 0) ? 1 : 0;
    if (!feasible[k][ri][rj]) return 0;
    auto key = std::make_tuple(k, ri, rj);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Bidegree vb = ctx.bidegree(allowed[k]);
    std::size_t total = 0;
    for (int si = ri, sj = rj; si >= 0 && sj >= 0; si -= vb.i, sj -= vb.j)
      total += count(k + 1, si, sj, memo);
    memo[key] = total;
    return total;
  }
};

}  // namespace

std::vector<Monomial> AlgebraContext::enumerate(
    Bidegree b, const std::function<bool(VarIndex)>& exclude) const {
  std::vector<Monomial> out;
  if (b.i < 0 || b.j < 0) return out;
  Enumerator en(*this, b, exclude);
  if (!en.feasible[0][b.i][b.j]) return out;
  Monomial::FactorList cur;
  auto visit = [&](const Monomial::FactorList& f) { out.emplace_back(f, b); };
  en.run(0, b.i, b.j, cur, visit);
  std::sort(out.begin(), out.end(), MonomialOrder());
  return out;
}

std::size_t AlgebraContext::count(Bidegree b,
                                  const std::function<bool(VarIndex)>& exclude) const {
  if (b.i < 0 || b.j < 0) return 0;
  Enumerator en(*this, b, exclude);
  std::map<std::tuple<std::size_t, int, int>, std::size_t> memo;
  return en.count(0, b.i, b.j, memo);
}

// ------------------------------------------------------------- text form

std::string AlgebraContext::to_string(const Monomial& m) const {
  if (m.is_unit()) return "1";
  std::string out;
  for (auto [v, e] : m.factors()) {
    if (!out.empty()) out += '*';
    out += vars_.at(v).to_string();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string AlgebraContext::to_string(const Polynomial& p) const {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += rational_to_string(c);
    if (!m.is_unit()) out += "*" + to_string(m);
  }
  return out;
}

namespace {

int parse_int(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 6) throw InputError("bad integer in '" + std::string(whole) + "'");
  int v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw InputError("bad integer in '" + std::string(whole) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

}  // namespace

Monomial AlgebraContext::parse_monomial(std::string_view text) const {
  if (text == "1") return unit();
  Monomial m;
  std::size_t pos = 0;
  VarIndex last = 0;
  bool first = true;
  while (pos <= text.size()) {
    std::size_t star = text.find('*', pos);
    std::string_view tok = text.substr(pos, star == std::string_view::npos ? text.npos : star - pos);
    std::string_view base = tok;
    unsigned e = 1;
    auto caret = tok.find('^');
    if (caret != std::string_view::npos) {
      base = tok.substr(0, caret);
      e = static_cast<unsigned>(parse_int(tok.substr(caret + 1), text));
      if (e < 2) throw InputError("exponent must be written only when at least 2: '" + std::string(text) + "'");
    }
    std::optional<VarIndex> idx;
    if (base == "y") {
      idx = y_index();
    } else if (base.size() > 5 && base.substr(0, 2) == "x[" && base.back() == ']') {
      auto inner = base.substr(2, base.size() - 3);
      auto comma = inner.find(',');
      if (comma == std::string_view::npos) throw InputError("bad variable '" + std::string(base) + "'");
      idx = x_index(parse_int(inner.substr(0, comma), text), parse_int(inner.substr(comma + 1), text));
    }
    if (!idx) throw InputError("unknown variable '" + std::string(base) + "' for genus " + std::to_string(g_));
    if (!first && *idx <= last) throw InputError("factors out of canonical order in '" + std::string(text) + "'");
    m = m * var_power(*idx, e);
    last = *idx;
    first = false;
    if (star == std::string_view::npos) break;
    pos = star + 1;
  }
  return m;
}

Polynomial AlgebraContext::parse_polynomial(std::string_view text) const {
  Polynomial p;
  if (text == "0") return p;
  std::size_t pos = 0;
  std::optional<Monomial> prev;
  while (true) {
    std::size_t sep = text.find(" + ", pos);
    std::string_view tok = text.substr(pos, sep == std::string_view::npos ? text.npos : sep - pos);
    auto star = tok.find('*');
    Rational c = parse_rational(tok.substr(0, star));
    Monomial m = star == std::string_view::npos ? unit() : parse_monomial(tok.substr(star + 1));
    if (sgn(c) == 0) throw InputError("zero coefficient in '" + std::string(text) + "'");
    if (prev && compare_monomials(*prev, m) >= 0)
      throw InputError("terms out of canonical order in '" + std::string(text) + "'");
    p.add_term(m, c);
    prev = m;
    if (sep == std::string_view::npos) break;
    pos = sep + 3;
  }
  return p;
}

}  // namespace tautring
