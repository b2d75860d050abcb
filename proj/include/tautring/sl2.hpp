#pragma once

#include <unordered_map>
#include <vector>

#include "tautring/algebra.hpp"

namespace tautring {

// Multiplication by x[2,0].
Polynomial apply_E(const AlgebraContext& ctx, const Polynomial& p);
// Scaling of each bidegree (i,j) piece by i - g.
Polynomial apply_H(const AlgebraContext& ctx, const Polynomial& p);
// The second order operator, applied term by term.
Polynomial apply_F(const AlgebraContext& ctx, const Polynomial& p);
Polynomial apply_F_power(const AlgebraContext& ctx, const Polynomial& p, unsigned nu);
Polynomial apply_F(const AlgebraContext& ctx, const Monomial& m);

// y x_{i-1,j-1} x_{k-1,l-1} - C(i+k-2, i-1) x_{i+k-2, j+l} for the pair (a, b).
Polynomial pair_coefficient(const AlgebraContext& ctx, VarIndex a, VarIndex b);
// x_{i-2, j} for a = x_{i,j}.
Polynomial first_order_coefficient(const AlgebraContext& ctx, VarIndex a);

inline int sl2_weight(const AlgebraContext& ctx, Bidegree b) { return b.i - ctx.genus(); }

// Same operator with per-monomial images cached.
class FOperator {
 public:
  explicit FOperator(ContextPtr ctx) : ctx_(std::move(ctx)) {}
  const Polynomial& image(const Monomial& m);
  Polynomial apply(const Polynomial& p);
  Polynomial power(const Polynomial& p, unsigned nu);
  const AlgebraContext& context() const { return *ctx_; }

 private:
  ContextPtr ctx_;
  std::unordered_map<Monomial, Polynomial, MonomialHash> cache_;
};

// One term c * mu * x[2,0]^a * core of F(m), where mu only involves column
// zero and core avoids column zero and x[2,0].
struct SplitTerm {
  long long coef = 0;
  Monomial mu;
  unsigned x20 = 0;
  Monomial core;
};

// F(m) with integer coefficients, like terms merged, in a deterministic order.
std::vector<SplitTerm> split_F_image(const AlgebraContext& ctx, const Monomial& m);

struct SplitMonomial {
  Monomial mu;
  unsigned x20 = 0;
  Monomial core;
};
SplitMonomial split_monomial(const AlgebraContext& ctx, const Monomial& m);

// Coefficients c_k with F^n E^a w = sum_k c_k E^{a-k} F^{n-k} w for w of
// weight lambda, k = 0..min(n, a).
template <class Field>
std::vector<typename Field::value_type> lowering_coefficients(const Field& K, int n, int a,
                                                              int lambda) {
  using T = typename Field::value_type;
  // table[a'][n'] holds the expansion of F^{n'} E^{a'} w indexed by k.
  std::vector<std::vector<std::vector<T>>> table(a + 1, std::vector<std::vector<T>>(n + 1));
  for (int nn = 0; nn <= n; ++nn) table[0][nn] = {K.one()};
  for (int aa = 1; aa <= a; ++aa) {
    for (int nn = 0; nn <= n; ++nn) {
      // F^n E u = E F^n u - n (lambda_u - n + 1) F^{n-1} u with u = E^{aa-1} w.
      std::vector<T> out(std::min(nn, aa) + 1, K.zero());
      const auto& first = table[aa - 1][nn];
      for (std::size_t k = 0; k < first.size(); ++k) out[k] = K.add(out[k], first[k]);
      if (nn >= 1) {
        long long lam_u = lambda + 2LL * (aa - 1);
        T c = K.neg(K.from_int(static_cast<long long>(nn) * (lam_u - nn + 1)));
        const auto& second = table[aa - 1][nn - 1];
        for (std::size_t k = 0; k < second.size(); ++k) K.axpy(out[k + 1], c, second[k]);
      }
      table[aa][nn] = std::move(out);
    }
  }
  return table[a][n];
}

}  // namespace tautring
