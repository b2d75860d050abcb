#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tautring/algebra.hpp"
#include "tautring/quotient.hpp"

namespace tautring {

// Exponents of psi (slot 0) and kappa_1, kappa_2, ... (slot i), without
// trailing zeros.
class KappaMonomial {
 public:
  KappaMonomial() = default;
  static KappaMonomial psi(unsigned e = 1);
  static KappaMonomial kappa(int i, unsigned e = 1);

  unsigned psi_exponent() const { return exps_.empty() ? 0 : exps_[0]; }
  unsigned kappa_exponent(int i) const;
  int max_kappa() const { return exps_.empty() ? 0 : static_cast<int>(exps_.size()) - 1; }
  int degree() const;
  bool is_unit() const { return exps_.empty(); }
  const std::vector<std::uint16_t>& exponents() const { return exps_; }

  KappaMonomial operator*(const KappaMonomial& o) const;
  KappaMonomial without_psi() const;
  bool operator==(const KappaMonomial& o) const { return exps_ == o.exps_; }
  // Graded by degree, then lexicographic with the smaller exponent vector first.
  bool operator<(const KappaMonomial& o) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<std::uint16_t> exps_;
};

struct KappaMonomialHash {
  std::size_t operator()(const KappaMonomial& m) const;
};

class KappaPolynomial {
 public:
  KappaPolynomial() = default;
  static KappaPolynomial constant(const Rational& c);
  static KappaPolynomial term(const KappaMonomial& m, const Rational& c = 1);

  const std::map<KappaMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const KappaMonomial& m) const;
  void add_term(const KappaMonomial& m, const Rational& c);
  void add_scaled(const KappaPolynomial& p, const Rational& c);

  KappaPolynomial operator+(const KappaPolynomial& o) const;
  KappaPolynomial operator-(const KappaPolynomial& o) const;
  KappaPolynomial operator*(const KappaPolynomial& o) const;
  bool operator==(const KappaPolynomial& o) const { return terms_ == o.terms_; }

  std::string to_string() const;

 private:
  std::map<KappaMonomial, Rational> terms_;
};

// x[0,2i] -> 2^-(i+1) sum_j C(i+1, j+1) psi^(i-j) kappa_j + psi^i and y -> psi,
// with kappa_0 = 2g - 2. Throws InputError outside column zero.
KappaPolynomial p_to_kappa(const AlgebraContext& ctx, const Polynomial& p);
// The inverse substitution.
Polynomial kappa_to_p(const AlgebraContext& ctx, const KappaPolynomial& q);
// psi^s K -> kappa_{s-1} K, with kappa_0 = 2g - 2 and kappa_{-1} = 0.
KappaPolynomial qstar_pushforward(int genus, const KappaPolynomial& q);

// Monomials of degree d in psi (optionally) and kappa_1..kappa_max_kappa, ascending.
std::vector<KappaMonomial> kappa_monomials(int d, int max_kappa, bool with_psi);

// Relation space of one degree of the kappa ring.
template <class Field>
struct KappaPiece {
  using T = typename Field::value_type;
  int degree = 0;
  std::vector<KappaMonomial> ambient;
  std::unordered_map<KappaMonomial, std::uint32_t, KappaMonomialHash> index;
  std::vector<std::uint32_t> pivots;
  std::vector<std::uint32_t> standard;
  std::vector<std::int32_t> std_pos;
  std::vector<std::int32_t> row_of_col;
  std::vector<SparseVec<T>> nf;  // normal form of pivots[r] in standard positions
  std::size_t pushed = 0;        // pushed relations offered

  std::size_t dim() const { return standard.size(); }
  std::size_t rank() const { return pivots.size(); }

  void add_nf(const Field& K, std::vector<T>& acc, std::uint32_t col, const T& c) const {
    std::int32_t s = std_pos[col];
    if (s >= 0) {
      acc[s] = K.add(acc[s], c);
    } else {
      for (const auto& [p, v] : nf[row_of_col[col]]) K.axpy(acc[p], c, v);
    }
  }
};

// The ring generated by kappa classes modulo the pushforwards of the relations
// of the column zero ring.
template <class Field>
class MgRing {
 public:
  using T = typename Field::value_type;
  using Piece = KappaPiece<Field>;

  // rtilde must be computed through codimension max_codim + 1.
  static MgRing build(const Quotient<Field>& rtilde, int max_codim) {
    const auto& ctx = rtilde.context();
    const Field& K = rtilde.field();
    const int g = ctx.genus();
    MgRing ring(g, K, max_codim);
    ring.max_kappa_ = std::max(g - 2, max_codim);
    int reach = std::min(max_codim, rtilde.completed_codim() - 1);
    for (int d = 0; d <= reach; ++d) {
      // Kernel of the kappa-psi monomials of degree d + 1 in the column zero ring.
      Bidegree b{0, 2 * (d + 1)};
      auto src = kappa_monomials(d + 1, ring.max_kappa_ + 1, true);
      std::size_t r = rtilde.piece(b)->dim();
      Echelon<Field> E(K, r + src.size());
      for (std::size_t k = 0; k < src.size(); ++k) {
        auto img = rtilde.reduce(b, kappa_to_p(ctx, KappaPolynomial::term(src[k])));
        SparseVec<T> row;
        for (std::size_t s = 0; s < r; ++s)
          if (!K.is_zero(img[s])) row.emplace_back(static_cast<std::uint32_t>(s), img[s]);
        row.emplace_back(static_cast<std::uint32_t>(r + k), K.one());
        E.insert(row);
      }
      Piece piece;
      piece.degree = d;
      piece.ambient = kappa_monomials(d, ring.max_kappa_, false);
      for (std::uint32_t k = 0; k < piece.ambient.size(); ++k) piece.index.emplace(piece.ambient[k], k);
      Echelon<Field> R(K, piece.ambient.size());
      for (auto pc : E.pivots()) {
        if (pc < r) continue;
        // Kernel vector: e_pc + tail, all in the identity block.
        std::map<std::uint32_t, T> pushed;
        auto push = [&](std::uint32_t k, const T& c) {
          const KappaMonomial& m = src[k - r];
          unsigned s = m.psi_exponent();
          if (s == 0) return;
          KappaMonomial rest = m.without_psi();
          T coef = c;
          if (s == 1) {
            coef = K.mul(coef, K.from_int(2 * g - 2));
          } else {
            rest = rest * KappaMonomial::kappa(static_cast<int>(s) - 1);
          }
          auto it = piece.index.find(rest);
          if (it == piece.index.end()) throw PreconditionError("pushforward outside the kappa basis");
          auto& slot = pushed.emplace(it->second, K.zero()).first->second;
          slot = K.add(slot, coef);
        };
        push(pc, K.one());
        for (const auto& [c, v] : E.tail(pc)) push(c, v);
        SparseVec<T> row;
        for (const auto& [c, v] : pushed)
          if (!K.is_zero(v)) row.emplace_back(c, v);
        ++piece.pushed;
        R.insert(row);
      }
      piece.pivots = R.pivots();
      piece.std_pos.assign(piece.ambient.size(), -1);
      piece.row_of_col.assign(piece.ambient.size(), -1);
      for (std::size_t k = 0; k < piece.pivots.size(); ++k) piece.row_of_col[piece.pivots[k]] = static_cast<std::int32_t>(k);
      for (std::uint32_t c = 0; c < piece.ambient.size(); ++c)
        if (piece.row_of_col[c] < 0) {
          piece.std_pos[c] = static_cast<std::int32_t>(piece.standard.size());
          piece.standard.push_back(c);
        }
      for (auto pc : piece.pivots) {
        SparseVec<T> nf;
        for (const auto& [c, v] : R.tail(pc)) nf.emplace_back(piece.std_pos[c], K.neg(v));
        piece.nf.push_back(std::move(nf));
      }
      ring.pieces_.push_back(std::move(piece));
      ring.completed_ = d;
    }
    return ring;
  }

  int genus() const { return g_; }
  int completed_codim() const { return completed_; }
  int max_kappa() const { return max_kappa_; }
  const Piece& piece(int d) const { return pieces_.at(d); }

  DimensionTable dimension_table() const {
    DimensionTable t;
    t.genus = g_;
    t.mode = Mode::Mg;
    t.max_codim = max_codim_;
    t.completed_codim = completed_;
    t.complete = completed_ >= max_codim_;
    for (const auto& p : pieces_)
      t.records.push_back({{0, 2 * p.degree}, p.degree, p.ambient.size(), p.rank(), p.dim()});
    return t;
  }

  // Normal form of a homogeneous kappa polynomial of degree d.
  std::vector<T> reduce(int d, const KappaPolynomial& q) const {
    const Piece& p = pieces_.at(d);
    std::vector<T> acc(p.dim(), K_.zero());
    for (const auto& [m, c] : q.terms()) {
      if (m.degree() != d || m.psi_exponent()) throw PreconditionError("reduce: not a kappa polynomial of degree " + std::to_string(d));
      auto it = p.index.find(m);
      if (it == p.index.end()) throw PreconditionError("reduce: kappa index beyond the ring");
      p.add_nf(K_, acc, it->second, K_.from_rational(c));
    }
    return acc;
  }

  PairingReport pairing_report() const {
    int s = g_ - 2;
    if (completed_ < s) throw PreconditionError("table does not reach the socle codimension " + std::to_string(s));
    auto table = dimension_table();
    SocleInfo soc = socle_check(table);
    auto dims = table.dims_by_codim();
    std::vector<T> functional;
    if (soc.dim == 1) {
      const Piece& sp = pieces_.at(s);
      functional.assign(sp.ambient.size(), K_.zero());
      for (std::uint32_t c = 0; c < sp.ambient.size(); ++c) {
        std::vector<T> acc(1, K_.zero());
        sp.add_nf(K_, acc, c, K_.one());
        functional[c] = acc[0];
      }
    }
    auto entry = [&](int a, std::size_t u, std::size_t v) -> T {
      const Piece& p1 = pieces_.at(a);
      const Piece& p2 = pieces_.at(s - a);
      KappaMonomial m = p1.ambient[p1.standard[u]] * p2.ambient[p2.standard[v]];
      return functional[pieces_.at(s).index.at(m)];
    };
    return assemble_pairing(K_, g_, Mode::Mg, soc, dims, entry);
  }

  // Pushed relations of degree d times kappa_i must lie in the relation
  // space of degree d + i. Returns the failures as text.
  std::vector<std::string> closure_check() const {
    std::vector<std::string> out;
    for (const auto& p : pieces_)
      for (std::size_t r = 0; r < p.rank(); ++r)
        for (int i = 1; p.degree + i <= completed_ && i <= max_kappa_; ++i) {
          const Piece& up = pieces_.at(p.degree + i);
          std::vector<T> acc(up.dim(), K_.zero());
          KappaMonomial k = KappaMonomial::kappa(i);
          up.add_nf(K_, acc, up.index.at(p.ambient[p.pivots[r]] * k), K_.one());
          for (const auto& [sp, v] : p.nf[r])
            up.add_nf(K_, acc, up.index.at(p.ambient[p.standard[sp]] * k), K_.neg(v));
          for (const auto& x : acc)
            if (!K_.is_zero(x)) {
              out.push_back("degree " + std::to_string(p.degree) + " relation " + std::to_string(r) + " times kappa_" +
                            std::to_string(i) + " is not a relation");
              break;
            }
        }
    return out;
  }

 private:
  MgRing(int g, Field K, int max_codim) : g_(g), K_(std::move(K)), max_codim_(max_codim) {}

  int g_;
  Field K_;
  int max_codim_;
  int max_kappa_ = 0;
  int completed_ = -1;
  std::vector<Piece> pieces_;
};

}  // namespace tautring
