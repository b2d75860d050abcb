#include "tautring/sl2.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace tautring {

Polynomial apply_E(const AlgebraContext& ctx, const Polynomial& p) {
  return p.times(ctx.var(ctx.x20_index()));
}

Polynomial apply_H(const AlgebraContext& ctx, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) out.add_term(m, c * sl2_weight(ctx, m.bidegree()));
  return out;
}

Polynomial pair_coefficient(const AlgebraContext& ctx, VarIndex a, VarIndex b) {
  Bidegree p = ctx.bidegree(a), q = ctx.bidegree(b);
  Polynomial out = ctx.y() * ctx.x(p.i - 1, p.j - 1) * ctx.x(q.i - 1, q.j - 1);
  out.add_scaled(ctx.x(p.i + q.i - 2, p.j + q.j), -binomial(p.i + q.i - 2, p.i - 1));
  return out;
}

Polynomial first_order_coefficient(const AlgebraContext& ctx, VarIndex a) {
  Bidegree p = ctx.bidegree(a);
  return ctx.x(p.i - 2, p.j);
}

Polynomial apply_F(const AlgebraContext& ctx, const Monomial& m) {
  Polynomial out;
  const auto& f = m.factors();
  const VarIndex y = ctx.y_index();
  for (std::size_t s = 0; s < f.size(); ++s) {
    auto [a, ea] = f[s];
    if (a == y) continue;
    if (ea >= 2) {
      Monomial rest = ctx.divide(ctx.divide(m, a), a);
      Rational mult = Rational(ea) * (ea - 1) / 2;
      out.add_scaled(pair_coefficient(ctx, a, a).times(rest), mult);
    }
    for (std::size_t t = s + 1; t < f.size(); ++t) {
      auto [b, eb] = f[t];
      if (b == y) continue;
      Monomial rest = ctx.divide(ctx.divide(m, a), b);
      out.add_scaled(pair_coefficient(ctx, a, b).times(rest), Rational(ea) * eb);
    }
    out.add_scaled(first_order_coefficient(ctx, a).times(ctx.divide(m, a)), Rational(ea));
  }
  return out;
}

Polynomial apply_F(const AlgebraContext& ctx, const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) out.add_scaled(apply_F(ctx, m), c);
  return out;
}

Polynomial apply_F_power(const AlgebraContext& ctx, const Polynomial& p, unsigned nu) {
  Polynomial out = p;
  for (unsigned k = 0; k < nu && !out.is_zero(); ++k) out = apply_F(ctx, out);
  return out;
}

const Polynomial& FOperator::image(const Monomial& m) {
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  return cache_.emplace(m, apply_F(*ctx_, m)).first->second;
}

Polynomial FOperator::apply(const Polynomial& p) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) out.add_scaled(image(m), c);
  return out;
}

Polynomial FOperator::power(const Polynomial& p, unsigned nu) {
  Polynomial out = p;
  for (unsigned k = 0; k < nu && !out.is_zero(); ++k) out = apply(out);
  return out;
}

SplitMonomial split_monomial(const AlgebraContext& ctx, const Monomial& m) {
  Monomial::FactorList mu, core;
  Bidegree bmu{}, bcore{};
  SplitMonomial out;
  for (auto [v, e] : m.factors()) {
    Bidegree b = ctx.bidegree(v);
    if (ctx.is_column0(v)) {
      mu.emplace_back(v, e);
      bmu = bmu + Bidegree{b.i * e, b.j * e};
    } else if (v == ctx.x20_index()) {
      out.x20 = e;
    } else {
      core.emplace_back(v, e);
      bcore = bcore + Bidegree{b.i * e, b.j * e};
    }
  }
  out.mu = Monomial(std::move(mu), bmu);
  out.core = Monomial(std::move(core), bcore);
  return out;
}

namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw PreconditionError("coefficient overflow in F");
  return r;
}

long long small_binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  static const std::vector<std::vector<long long>> pascal = [] {
    std::vector<std::vector<long long>> t(62);
    for (int a = 0; a < 62; ++a) {
      t[a].assign(a + 1, 1);
      for (int b = 1; b < a; ++b) t[a][b] = t[a - 1][b - 1] + t[a - 1][b];
    }
    return t;
  }();
  if (n < 62) return pascal[n][k];
  Rational b = binomial(n, k);
  if (!b.get_num().fits_slong_p()) throw PreconditionError("coefficient overflow in F");
  return b.get_num().get_si();
}

// Factor x_{a,b} as (constant, optional variable); constant 0 means the symbol vanishes.
std::pair<long long, std::optional<VarIndex>> symbol(const AlgebraContext& ctx, int a, int b) {
  if (a == 0 && b == 0) return {ctx.genus(), std::nullopt};
  auto idx = ctx.x_index(a, b);
  if (!idx) return {0, std::nullopt};
  return {1, idx};
}

}  // namespace

std::vector<SplitTerm> split_F_image(const AlgebraContext& ctx, const Monomial& m) {
  std::unordered_map<Monomial, long long, MonomialHash> acc;
  auto emit = [&](long long c, const Monomial& rest, std::initializer_list<std::optional<VarIndex>> extra) {
    if (c == 0) return;
    Monomial t = rest;
    for (auto v : extra)
      if (v) t = t * ctx.var(*v);
    long long& slot = acc[t];
    if (__builtin_add_overflow(slot, c, &slot)) throw PreconditionError("coefficient overflow in F");
  };
  const auto& f = m.factors();
  const VarIndex y = ctx.y_index();
  for (std::size_t s = 0; s < f.size(); ++s) {
    auto [a, ea] = f[s];
    if (a == y) continue;
    Bidegree p = ctx.bidegree(a);
    for (std::size_t t = s; t < f.size(); ++t) {
      auto [b, eb] = f[t];
      if (b == y) continue;
      long long mult = (t == s) ? static_cast<long long>(ea) * (ea - 1) / 2
                                : static_cast<long long>(ea) * eb;
      if (mult == 0) continue;
      Bidegree q = ctx.bidegree(b);
      Monomial rest = ctx.divide(ctx.divide(m, a), b);
      auto [c1, v1] = symbol(ctx, p.i - 1, p.j - 1);
      auto [c2, v2] = symbol(ctx, q.i - 1, q.j - 1);
      emit(checked_mul(mult, checked_mul(c1, c2)), rest, {v1, v2, std::optional<VarIndex>(y)});
      auto [c3, v3] = symbol(ctx, p.i + q.i - 2, p.j + q.j);
      emit(-checked_mul(mult, checked_mul(c3, small_binomial(p.i + q.i - 2, p.i - 1))), rest, {v3});
    }
    auto [c4, v4] = symbol(ctx, p.i - 2, p.j);
    emit(checked_mul(ea, c4), ctx.divide(m, a), {v4});
  }
  std::vector<SplitTerm> out;
  for (const auto& [t, c] : acc) {
    if (c == 0) continue;
    SplitMonomial sm = split_monomial(ctx, t);
    out.push_back({c, std::move(sm.mu), sm.x20, std::move(sm.core)});
  }
  return out;
}

}  // namespace tautring
