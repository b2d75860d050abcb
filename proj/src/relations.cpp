#include "tautring/relations.hpp"

namespace tautring {

Mode parse_mode(const std::string& s) {
  if (s == "rtilde") return Mode::RTilde;
  if (s == "ttilde") return Mode::TTilde;
  if (s == "mg") return Mode::Mg;
  throw InputError("unknown mode '" + s + "' (expected rtilde, ttilde or mg)");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::RTilde: return "rtilde";
    case Mode::TTilde: return "ttilde";
    case Mode::Mg: return "mg";
  }
  return "ttilde";
}

int socle_codim(Mode mode, int genus) {
  switch (mode) {
    case Mode::TTilde: return 2 * genus - 1;
    case Mode::RTilde: return genus - 1;
    case Mode::Mg: return genus - 2;
  }
  return 0;
}

std::vector<Bidegree> schedule(const AlgebraContext& ctx, Mode mode, int max_codim) {
  std::vector<Bidegree> out;
  for (int c = 0; c <= max_codim; ++c) {
    if (mode == Mode::TTilde) {
      for (int i = 0; i <= std::min(2 * ctx.genus(), 2 * c); ++i) out.push_back({i, 2 * c - i});
    } else {
      out.push_back({0, 2 * c});
    }
  }
  return out;
}

std::vector<Polynomial> rtilde_generators(const AlgebraContext& ctx, int i) {
  const int g = ctx.genus();
  auto exclude = [&](VarIndex v) { return v == ctx.x20_index(); };
  std::vector<Polynomial> out;
  for (const auto& m : ctx.enumerate({2 * g + 2, 2 * i}, exclude))
    out.push_back(apply_F_power(ctx, Polynomial::term(m), g + 1));
  return out;
}

namespace {

SparseVec<Rational> to_vec(const ReducedPiece<RationalField>& piece, const Polynomial& p) {
  SparseVec<Rational> v;
  for (const auto& [m, c] : p.terms()) {
    auto col = piece.column(m);
    if (col < 0) throw PreconditionError("polynomial outside the ambient basis");
    v.emplace_back(static_cast<std::uint32_t>(col), c);
  }
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return v;
}

}  // namespace

ReferenceResult reference_relation_space(
    const AlgebraContext& ctx, Mode mode, Bidegree b,
    const std::map<Bidegree, ReducedPiece<RationalField>>& lower, int window, FOperator& F) {
  if (window < 1) throw InputError("window must be positive");
  RationalField K;
  ReferenceResult res;
  auto& piece = res.piece;
  piece.bidegree = b;
  piece.set_ambient(ctx.enumerate(b));
  Echelon<RationalField> E(K, piece.size());
  const int g = ctx.genus();

  for (VarIndex v = 0; v < ctx.variable_count(); ++v) {
    Bidegree bp = b - ctx.bidegree(v);
    auto it = lower.find(bp);
    if (it == lower.end()) continue;
    const auto& lp = it->second;
    for (std::size_t r = 0; r < lp.pivots.size(); ++r) {
      Polynomial rel = Polynomial::term(lp.ambient[lp.pivots[r]]);
      for (const auto& [s, val] : lp.nf[r]) rel.add_term(lp.ambient[lp.standard[s]], -val);
      if (E.insert(to_vec(piece, rel.times(ctx.var(v)))))
        piece.provenance.push_back({"closure", lp.ambient[lp.pivots[r]], 0, ctx.var(v)});
    }
  }
  piece.closure_rank = E.rank();

  if (b.i > 2 * g) {
    for (std::uint32_t c = 0; c < piece.size(); ++c) E.insert({{c, Rational(1)}});
  } else if (mode == Mode::RTilde) {
    auto exclude = [&](VarIndex v) { return v == ctx.x20_index(); };
    for (const auto& m : ctx.enumerate({2 * g + 2, b.j}, exclude))
      if (E.insert(to_vec(piece, F.power(Polynomial::term(m), g + 1))))
        piece.provenance.push_back({"pure", m, g + 1, Monomial()});
    res.last_nu = res.first_stable_nu = g + 1;
  } else {
    int nu = (2 * g - b.i) / 2 + 1;
    int stable = 0;
    res.first_stable_nu = nu;
    for (; stable < window; ++nu) {
      std::size_t before = E.rank();
      for (const auto& m : ctx.enumerate({b.i + 2 * nu, b.j}))
        if (E.insert(to_vec(piece, F.power(Polynomial::term(m), nu))))
          piece.provenance.push_back({"pure", m, nu, Monomial()});
      if (E.rank() == before) {
        ++stable;
      } else {
        stable = 0;
        res.first_stable_nu = nu + 1;
      }
      res.last_nu = nu;
    }
  }
  piece.pure_rank = E.rank() - piece.closure_rank;

  piece.pivots = E.pivots();
  piece.finalize_columns();
  for (auto pc : piece.pivots) {
    SparseVec<Rational> nf;
    for (const auto& [c, val] : E.tail(pc)) nf.emplace_back(piece.std_pos[c], -val);
    piece.nf.push_back(std::move(nf));
  }
  return res;
}

}  // namespace tautring
