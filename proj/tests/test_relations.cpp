#include <random>

#include "doctest.h"
#include "tautring/relations.hpp"

using namespace tautring;

namespace {

using QPiece = ReducedPiece<RationalField>;

std::map<Bidegree, QPiece> reference_run(const ContextPtr& ctx, Mode mode, int max_codim, int window = 3) {
  FOperator F(ctx);
  std::map<Bidegree, QPiece> out;
  for (Bidegree b : schedule(*ctx, mode, max_codim))
    out.emplace(b, reference_relation_space(*ctx, mode, b, out, window, F).piece);
  return out;
}

template <class Field>
std::map<Bidegree, ReducedPiece<Field>> engine_run(const ContextPtr& ctx, Mode mode, int max_codim,
                                                   Field K = Field(), unsigned threads = 1) {
  EngineOptions opts;
  opts.max_codim = max_codim;
  opts.threads = threads;
  RelationEngine<Field> eng(ctx, mode, K, opts);
  REQUIRE(eng.run());
  CHECK(eng.completed_codim() == max_codim);
  return eng.take_pieces();
}

// Relation r = pivot monomial minus its normal form, as a polynomial.
Polynomial relation(const QPiece& p, std::size_t r) {
  Polynomial rel = Polynomial::term(p.ambient[p.pivots[r]]);
  for (const auto& [s, v] : p.nf[r]) rel.add_term(p.ambient[p.standard[s]], -v);
  return rel;
}

// Normal form of a homogeneous polynomial in the quotient, as standard coordinates.
std::vector<Rational> reduce(const QPiece& p, const Polynomial& f) {
  RationalField Q;
  std::vector<Rational> acc(p.dim(), Rational(0));
  for (const auto& [m, c] : f.terms()) {
    auto col = p.column(m);
    REQUIRE(col >= 0);
    p.add_nf(Q, acc, static_cast<std::uint32_t>(col), c);
  }
  return acc;
}

bool is_zero(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("schedule and socle codimension") {
  auto ctx = AlgebraContext::make(2);
  auto s = schedule(*ctx, Mode::TTilde, 2);
  std::vector<Bidegree> expected{{0, 0}, {0, 2}, {1, 1}, {2, 0}, {0, 4}, {1, 3}, {2, 2}, {3, 1}, {4, 0}};
  CHECK(s == expected);
  CHECK(schedule(*ctx, Mode::RTilde, 2) == std::vector<Bidegree>{{0, 0}, {0, 2}, {0, 4}});
  CHECK(socle_codim(Mode::TTilde, 5) == 9);
  CHECK(socle_codim(Mode::RTilde, 5) == 4);
  CHECK(socle_codim(Mode::Mg, 5) == 3);
  CHECK(parse_mode("rtilde") == Mode::RTilde);
  CHECK_THROWS_AS(parse_mode("full"), InputError);
}

TEST_CASE("engine reproduces the direct construction") {
  for (int g = 1; g <= 3; ++g) {
    auto ctx = AlgebraContext::make(g);
    int top = socle_codim(Mode::TTilde, g) + 1;
    auto ref = reference_run(ctx, Mode::TTilde, top);
    auto eng = engine_run<RationalField>(ctx, Mode::TTilde, top);
    REQUIRE(ref.size() == eng.size());
    for (const auto& [b, rp] : ref) {
      CAPTURE(g);
      CAPTURE(b.to_string());
      const auto& ep = eng.at(b);
      CHECK(ep.ambient == rp.ambient);
      CHECK(ep.pivots == rp.pivots);
      CHECK(ep.nf == rp.nf);
      CHECK(ep.closure_rank == rp.closure_rank);
    }
  }
}

TEST_CASE("engine agrees with the direct construction at genus 4") {
  auto ctx = AlgebraContext::make(4);
  auto ref = reference_run(ctx, Mode::TTilde, 4);
  auto eng = engine_run<RationalField>(ctx, Mode::TTilde, 4);
  for (const auto& [b, rp] : ref) {
    CAPTURE(b.to_string());
    CHECK(eng.at(b).pivots == rp.pivots);
    CHECK(eng.at(b).nf == rp.nf);
  }
}

TEST_CASE("reference window is stable") {
  // Past the first admissible step, further powers of F add nothing.
  for (int g = 2; g <= 3; ++g) {
    auto ctx = AlgebraContext::make(g);
    FOperator F(ctx);
    std::map<Bidegree, QPiece> lower;
    for (Bidegree b : schedule(*ctx, Mode::TTilde, 2 * g - 1)) {
      auto res = reference_relation_space(*ctx, Mode::TTilde, b, lower, 3, F);
      CHECK(res.first_stable_nu <= (2 * g - b.i) / 2 + 2);
      lower.emplace(b, std::move(res.piece));
    }
  }
}

TEST_CASE("column zero ring") {
  for (int g = 2; g <= 5; ++g) {
    auto ctx = AlgebraContext::make(g);
    int top = g;
    auto eng = engine_run<RationalField>(ctx, Mode::RTilde, top);
    auto ref = reference_run(ctx, Mode::RTilde, top);
    for (const auto& [b, rp] : ref) {
      CAPTURE(g);
      CAPTURE(b.to_string());
      CHECK(eng.at(b).pivots == rp.pivots);
      CHECK(eng.at(b).nf == rp.nf);
      // The generators F^{g+1}(m) vanish in the quotient.
      for (const auto& gen : rtilde_generators(*ctx, b.j / 2)) CHECK(is_zero(reduce(eng.at(b), gen)));
    }
    // No relations up to codimension floor(g/3).
    for (int i = 0; i <= g / 3; ++i) CHECK(eng.at({0, 2 * i}).rank() == 0);
  }
  // Column zero of the full ring agrees with the column zero ring.
  for (int g = 2; g <= 4; ++g) {
    auto ctx = AlgebraContext::make(g);
    auto full = engine_run<RationalField>(ctx, Mode::TTilde, g);
    auto col0 = engine_run<RationalField>(ctx, Mode::RTilde, g);
    for (const auto& [b, p] : col0) {
      CAPTURE(g);
      CAPTURE(b.to_string());
      CHECK(full.at(b).pivots == p.pivots);
      CHECK(full.at(b).nf == p.nf);
    }
  }
}

TEST_CASE("relation spaces are ideals and F-stable") {
  for (int g = 2; g <= 3; ++g) {
    auto ctx = AlgebraContext::make(g);
    int top = 2 * g - 1;
    auto eng = engine_run<RationalField>(ctx, Mode::TTilde, top);
    for (const auto& [b, p] : eng) {
      CAPTURE(g);
      CAPTURE(b.to_string());
      for (std::size_t r = 0; r < p.rank(); ++r) {
        Polynomial rel = relation(p, r);
        if (b.i >= 2) {
          auto it = eng.find({b.i - 2, b.j});
          REQUIRE(it != eng.end());
          CHECK(is_zero(reduce(it->second, apply_F(*ctx, rel))));
        }
        for (VarIndex v = 0; v < ctx->variable_count(); ++v) {
          Bidegree up = b + ctx->bidegree(v);
          auto it = eng.find(up);
          if (it == eng.end()) continue;
          CHECK(is_zero(reduce(it->second, rel.times(ctx->var(v)))));
        }
      }
    }
  }
}

TEST_CASE("prime field run has the rational dimensions") {
  PrimeStream primes(3);
  for (int g = 2; g <= 4; ++g) {
    auto ctx = AlgebraContext::make(g);
    int top = std::min(2 * g - 1, 5);
    auto q = engine_run<RationalField>(ctx, Mode::TTilde, top);
    auto p = engine_run<PrimeField>(ctx, Mode::TTilde, top, PrimeField(primes.next()));
    for (const auto& [b, piece] : q) {
      CAPTURE(b.to_string());
      CHECK(p.at(b).pivots == piece.pivots);
    }
  }
}

TEST_CASE("threads do not change the result") {
  auto ctx = AlgebraContext::make(4);
  auto one = engine_run<RationalField>(ctx, Mode::TTilde, 5, RationalField(), 1);
  auto many = engine_run<RationalField>(ctx, Mode::TTilde, 5, RationalField(), 6);
  for (const auto& [b, p] : one) {
    CHECK(many.at(b).pivots == p.pivots);
    CHECK(many.at(b).nf == p.nf);
  }
}

TEST_CASE("relation basis round trip") {
  auto ctx = AlgebraContext::make(3);
  RationalField Q;
  auto eng = engine_run<RationalField>(ctx, Mode::TTilde, 4);
  for (const auto& [b, p] : eng) {
    auto rb = to_relation_basis(*ctx, Mode::TTilde, Q, p);
    CHECK(rb.dim() == p.dim());
    auto back = from_relation_basis(Q, rb);
    CHECK(back.pivots == p.pivots);
    CHECK(back.nf == p.nf);
  }
  auto rb = to_relation_basis(*ctx, Mode::TTilde, Q, eng.at({2, 2}));
  CHECK_THROWS_AS(from_relation_basis(PrimeField(2305843009213693951ull), rb), PreconditionError);
  if (!rb.rows.empty() && !rb.pivots.empty()) {
    rb.rows[0].emplace_back(rb.pivots[0], "1");
    CHECK_THROWS_AS(from_relation_basis(Q, rb), IntegrityError);
  }
}

TEST_CASE("resource limits stop the run") {
  auto ctx = AlgebraContext::make(6);
  EngineOptions opts;
  opts.max_codim = 11;
  opts.max_core_monomials = 50;
  RelationEngine<RationalField> eng(ctx, Mode::TTilde, RationalField(), opts);
  CHECK_FALSE(eng.run());
  CHECK(eng.completed_codim() < 11);
}

TEST_CASE("merging coefficient in the column zero argument") {
  // Coefficient of x[0,2i] in F^{3i}(x[3,1]^{2i}). Frozen from a standalone
  // evaluation of the operator that keeps only y-free terms; it does not
  // depend on the genus once all the variables exist.
  const std::vector<std::pair<int, long>> frozen{{1, -10}, {2, -43200}, {3, -4009824000L}};
  for (int g = 4; g <= 6; ++g) {
    auto ctx = AlgebraContext::make(g);
    FOperator F(ctx);
    for (auto [i, c] : frozen) {
      Monomial m = ctx->var_power(*ctx->x_index(3, 1), static_cast<unsigned>(2 * i));
      Polynomial img = F.power(Polynomial::term(m), 3 * i);
      CHECK(img.coefficient(ctx->var(*ctx->x_index(0, 2 * i))) == Rational(c));
      CHECK(c < 0);
    }
  }
}

TEST_CASE("genus one") {
  auto ctx = AlgebraContext::make(1);
  auto eng = engine_run<RationalField>(ctx, Mode::TTilde, 3);
  // x[2,0]^2 = 0 and y is free.
  CHECK(eng.at({0, 2}).dim() == 1);
  CHECK(eng.at({2, 0}).dim() == 1);
  CHECK(eng.at({0, 4}).dim() == 1);
  CHECK(eng.at({2, 2}).dim() == 1);
  auto r = engine_run<RationalField>(ctx, Mode::RTilde, 3);
  for (const auto& [b, p] : r) CHECK(p.rank() == 0);
}
