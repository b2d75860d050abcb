#pragma once

#include <map>
#include <string>
#include <vector>

#include "tautring/algebra.hpp"
#include "tautring/field.hpp"
#include "tautring/linalg.hpp"
#include "tautring/relations.hpp"
#include "tautring/sl2.hpp"

namespace tautring {

struct DimensionRecord {
  Bidegree bidegree{};
  int codim = 0;
  std::size_t monomials = 0;
  std::size_t relation_rank = 0;
  std::size_t dim = 0;
};

struct DimensionTable {
  int genus = 0;
  Mode mode = Mode::TTilde;
  int max_codim = 0;
  int completed_codim = -1;
  bool complete = true;
  std::vector<DimensionRecord> records;

  // Total dimension at a codimension; -1 when that codimension was not reached.
  long dim_at_codim(int c) const;
  std::vector<std::size_t> dims_by_codim() const;  // codims 0..completed_codim
};

struct SocleInfo {
  int codim = 0;
  std::size_t dim = 0;
  std::vector<Bidegree> location;  // bidegrees of positive dimension at the socle codim
};

SocleInfo socle_check(const DimensionTable& table);

struct PairingRecord {
  int codim = 0;  // left codim a; the right side is socle - a
  std::size_t dim_left = 0;
  std::size_t dim_right = 0;
  std::size_t rank = 0;
  std::size_t missing_left = 0;
  std::size_t missing_right = 0;
};

struct PairingReport {
  int genus = 0;
  Mode mode = Mode::TTilde;
  SocleInfo socle;
  std::vector<PairingRecord> pairings;
  bool gorenstein = false;
  std::string reason;  // empty when Gorenstein

  // Lines of the form "codim c: k missing", by increasing c.
  std::vector<std::string> missing_lines() const;
};

// Pairing report from a callback giving the socle coordinate of the product
// of basis element u in codim a with basis element v in codim socle - a.
template <class Field, class Entry>
PairingReport assemble_pairing(const Field& K, int genus, Mode mode, const SocleInfo& socle,
                               const std::vector<std::size_t>& dims, Entry&& entry) {
  PairingReport rep;
  rep.genus = genus;
  rep.mode = mode;
  rep.socle = socle;
  if (socle.dim != 1) {
    rep.gorenstein = false;
    rep.reason = "socle dimension " + std::to_string(socle.dim) + " != 1";
    return rep;
  }
  const int s = socle.codim;
  bool perfect = true;
  for (int a = 0; 2 * a <= s; ++a) {
    PairingRecord r;
    r.codim = a;
    r.dim_left = dims.at(a);
    r.dim_right = dims.at(s - a);
    Echelon<Field> E(K, r.dim_right);
    for (std::size_t u = 0; u < r.dim_left; ++u) {
      SparseVec<typename Field::value_type> row;
      for (std::size_t v = 0; v < r.dim_right; ++v) {
        auto x = entry(a, u, v);
        if (!K.is_zero(x)) row.emplace_back(static_cast<std::uint32_t>(v), x);
      }
      E.insert(row);
    }
    r.rank = E.rank();
    r.missing_left = r.dim_left - r.rank;
    r.missing_right = r.dim_right - r.rank;
    if (r.missing_left || r.missing_right) perfect = false;
    rep.pairings.push_back(r);
  }
  rep.gorenstein = perfect;
  if (!perfect) rep.reason = "pairing not perfect";
  return rep;
}

template <class T>
struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<T> data;
  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, T zero) : rows(r), cols(c), data(r * c, zero) {}
  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

template <class Field>
std::size_t matrix_rank(const Field& K, const DenseMatrix<typename Field::value_type>& M) {
  Echelon<Field> E(K, M.cols);
  for (std::size_t r = 0; r < M.rows; ++r) {
    SparseVec<typename Field::value_type> row;
    for (std::size_t c = 0; c < M.cols; ++c)
      if (!K.is_zero(M.at(r, c))) row.emplace_back(static_cast<std::uint32_t>(c), M.at(r, c));
    E.insert(row);
  }
  return E.rank();
}

// The quotient ring given by relation pieces, for the rtilde and ttilde modes.
template <class Field>
class Quotient {
 public:
  using T = typename Field::value_type;
  using Piece = ReducedPiece<Field>;
  using Vec = std::vector<T>;

  Quotient(ContextPtr ctx, Mode mode, Field K, std::map<Bidegree, Piece> pieces, int max_codim,
           int completed_codim)
      : ctx_(std::move(ctx)), mode_(mode), K_(std::move(K)), pieces_(std::move(pieces)),
        max_codim_(max_codim), completed_codim_(completed_codim) {}

  const AlgebraContext& context() const { return *ctx_; }
  const Field& field() const { return K_; }
  Mode mode() const { return mode_; }
  int completed_codim() const { return completed_codim_; }
  const std::map<Bidegree, Piece>& pieces() const { return pieces_; }

  const Piece* piece(Bidegree b) const {
    auto it = pieces_.find(b);
    return it == pieces_.end() ? nullptr : &it->second;
  }

  DimensionTable dimension_table() const {
    DimensionTable t;
    t.genus = ctx_->genus();
    t.mode = mode_;
    t.max_codim = max_codim_;
    t.completed_codim = completed_codim_;
    t.complete = completed_codim_ >= max_codim_;
    for (const auto& b : schedule(*ctx_, mode_, completed_codim_)) {
      const Piece& p = pieces_.at(b);
      t.records.push_back({b, b.codim(), p.size(), p.rank(), p.dim()});
    }
    return t;
  }

  std::vector<Monomial> standard_monomials(Bidegree b) const {
    std::vector<Monomial> out;
    const Piece& p = require(b);
    for (auto c : p.standard) out.push_back(p.ambient[c]);
    return out;
  }

  // Whether every element of bidegree b is zero for a structural reason.
  bool vanishes(Bidegree b) const {
    if (b.i < 0 || b.j < 0) return true;
    if (mode_ == Mode::TTilde && b.i > 2 * ctx_->genus()) return true;
    if (mode_ == Mode::RTilde && b.i != 0) return true;
    return false;
  }

  // Normal form of a homogeneous polynomial of bidegree b.
  Vec reduce(Bidegree b, const Polynomial& f) const {
    if (vanishes(b)) return {};
    const Piece& p = require(b);
    Vec acc(p.dim(), K_.zero());
    for (const auto& [m, c] : f.terms()) {
      if (m.bidegree() != b) throw PreconditionError("reduce: polynomial is not of bidegree " + b.to_string());
      auto col = p.column(m);
      p.add_nf(K_, acc, static_cast<std::uint32_t>(col), K_.from_rational(c));
    }
    return acc;
  }

  // Product of elements given in standard coordinates.
  Vec multiply(Bidegree b1, const Vec& x, Bidegree b2, const Vec& y) const {
    Bidegree b = b1 + b2;
    if (vanishes(b) || vanishes(b1) || vanishes(b2)) return {};
    const Piece& p1 = require(b1);
    const Piece& p2 = require(b2);
    const Piece& p = require(b);
    if (x.size() != p1.dim() || y.size() != p2.dim()) throw PreconditionError("multiply: coordinate length mismatch");
    Vec acc(p.dim(), K_.zero());
    for (std::size_t s = 0; s < p1.dim(); ++s) {
      if (K_.is_zero(x[s])) continue;
      for (std::size_t t = 0; t < p2.dim(); ++t) {
        if (K_.is_zero(y[t])) continue;
        Monomial m = p1.ambient[p1.standard[s]] * p2.ambient[p2.standard[t]];
        p.add_nf(K_, acc, static_cast<std::uint32_t>(p.column(m)), K_.mul(x[s], y[t]));
      }
    }
    return acc;
  }

  // Unit vector of a standard monomial.
  Vec basis_vector(Bidegree b, std::size_t s) const {
    Vec v(require(b).dim(), K_.zero());
    v.at(s) = K_.one();
    return v;
  }

  SocleInfo socle() const {
    int s = socle_codim(mode_, ctx_->genus());
    if (completed_codim_ < s) throw PreconditionError("table does not reach the socle codimension " + std::to_string(s));
    return socle_check(dimension_table());
  }

  PairingReport pairing_report() const {
    SocleInfo soc = socle();
    auto table = dimension_table();
    auto dims = table.dims_by_codim();
    // Basis of each codim: standard monomials of its bidegrees in schedule order.
    std::map<int, std::vector<std::pair<Bidegree, std::uint32_t>>> basis;
    for (const auto& b : schedule(*ctx_, mode_, soc.codim)) {
      const Piece& p = pieces_.at(b);
      for (std::uint32_t k = 0; k < p.dim(); ++k) basis[b.codim()].emplace_back(b, k);
    }
    std::map<Bidegree, Vec> functional;  // socle coordinate of each ambient column
    if (soc.dim == 1) {
      Bidegree sb = soc.location.front();
      const Piece& sp = pieces_.at(sb);
      Vec f(sp.size(), K_.zero());
      for (std::uint32_t c = 0; c < sp.size(); ++c) {
        Vec acc(1, K_.zero());
        sp.add_nf(K_, acc, c, K_.one());
        f[c] = acc[0];
      }
      functional.emplace(sb, std::move(f));
    }
    auto entry = [&](int a, std::size_t u, std::size_t v) -> T {
      const auto& [b1, s1] = basis[a][u];
      const auto& [b2, s2] = basis[soc.codim - a][v];
      auto it = functional.find(b1 + b2);
      if (it == functional.end()) return K_.zero();
      const Piece& p1 = pieces_.at(b1);
      const Piece& p2 = pieces_.at(b2);
      const Piece& p = pieces_.at(b1 + b2);
      Monomial m = p1.ambient[p1.standard[s1]] * p2.ambient[p2.standard[s2]];
      return it->second[static_cast<std::size_t>(p.column(m))];
    };
    return assemble_pairing(K_, ctx_->genus(), mode_, soc, dims, entry);
  }

  // Multiplication by x[2,0] from (i, j) to (i + 2, j), as a dim(b+) x dim(b) matrix.
  DenseMatrix<T> e_matrix(Bidegree b) const {
    Bidegree up{b.i + 2, b.j};
    const Piece& p = require(b);
    std::size_t rows = vanishes(up) ? 0 : require(up).dim();
    DenseMatrix<T> M(rows, p.dim(), K_.zero());
    if (rows == 0) return M;
    Monomial x20 = ctx_->var(ctx_->x20_index());
    for (std::size_t s = 0; s < p.dim(); ++s) {
      Vec v = reduce(up, Polynomial::term(p.ambient[p.standard[s]] * x20));
      for (std::size_t r = 0; r < rows; ++r) M.at(r, s) = v[r];
    }
    return M;
  }

  // The operator F from (i, j) to (i - 2, j).
  DenseMatrix<T> f_matrix(Bidegree b) const {
    Bidegree down{b.i - 2, b.j};
    const Piece& p = require(b);
    std::size_t rows = vanishes(down) ? 0 : require(down).dim();
    DenseMatrix<T> M(rows, p.dim(), K_.zero());
    if (rows == 0) return M;
    for (std::size_t s = 0; s < p.dim(); ++s) {
      Vec v = reduce(down, apply_F(*ctx_, p.ambient[p.standard[s]]));
      for (std::size_t r = 0; r < rows; ++r) M.at(r, s) = v[r];
    }
    return M;
  }

  // Whether every piece of column j inside the house has been computed.
  bool column_available(int j) const {
    if (mode_ != Mode::TTilde) return false;
    for (int i = j % 2; i <= 2 * ctx_->genus(); i += 2)
      if (!piece({i, j})) return false;
    return true;
  }

  // exp(e) exp(-f) exp(e) on column j, as a map from the pieces (i, j) to the
  // whole column: result[i][i'] is the block from (i, j) to (i', j).
  std::map<int, std::map<int, DenseMatrix<T>>> fourier_matrix(int j) const {
    if (!column_available(j)) throw PreconditionError("column " + std::to_string(j) + " not fully computed");
    const int g = ctx_->genus();
    std::map<int, DenseMatrix<T>> E, F;
    std::map<int, std::size_t> dim;
    for (int i = j % 2; i <= 2 * g; i += 2) {
      dim[i] = require({i, j}).dim();
      E[i] = e_matrix({i, j});
      F[i] = f_matrix({i, j});
    }
    using Col = std::map<int, Vec>;
    auto apply = [&](const std::map<int, DenseMatrix<T>>& ops, int shift, const Col& v, const T& scale) {
      Col out;
      for (const auto& [i, x] : v) {
        const auto& M = ops.at(i);
        if (M.rows == 0) continue;
        Vec y(M.rows, K_.zero());
        for (std::size_t c = 0; c < M.cols; ++c) {
          if (K_.is_zero(x[c])) continue;
          T sc = K_.mul(scale, x[c]);
          for (std::size_t r = 0; r < M.rows; ++r) K_.axpy(y[r], sc, M.at(r, c));
        }
        out[i + shift] = std::move(y);
      }
      return out;
    };
    auto exp_apply = [&](const std::map<int, DenseMatrix<T>>& ops, int shift, T sign, const Col& v) {
      Col total = v;
      Col term = v;
      for (int k = 1; !term.empty() && k <= 2 * g + 2; ++k) {
        T scale = K_.mul(sign, K_.from_rational(Rational(1, k)));
        term = apply(ops, shift, term, scale);
        for (const auto& [i, x] : term) {
          auto& t = total[i];
          if (t.empty()) t.assign(x.size(), K_.zero());
          for (std::size_t r = 0; r < x.size(); ++r) t[r] = K_.add(t[r], x[r]);
        }
      }
      return total;
    };
    std::map<int, std::map<int, DenseMatrix<T>>> result;
    for (const auto& [i, d] : dim) {
      auto& blocks = result[i];
      for (const auto& [i2, d2] : dim) blocks[i2] = DenseMatrix<T>(d2, d, K_.zero());
      for (std::size_t s = 0; s < d; ++s) {
        Col v;
        v[i] = Vec(d, K_.zero());
        v[i][s] = K_.one();
        v = exp_apply(E, 2, K_.one(), v);
        v = exp_apply(F, -2, K_.neg(K_.one()), v);
        v = exp_apply(E, 2, K_.one(), v);
        for (const auto& [i2, x] : v)
          for (std::size_t r = 0; r < x.size(); ++r) blocks[i2].at(r, s) = x[r];
      }
    }
    return result;
  }

  // Every relation times every variable, and F of every relation, must reduce
  // to zero wherever the target bidegree was computed.
  std::vector<std::string> invariant_violations() const {
    std::vector<std::string> out;
    for (const auto& [b, p] : pieces_)
      for (std::size_t r = 0; r < p.rank(); ++r) {
        Polynomial rel = Polynomial::term(p.ambient[p.pivots[r]]);
        for (const auto& [s, v] : p.nf[r]) rel.add_term(p.ambient[p.standard[s]], -K_.to_rational(v));
        auto nonzero = [&](const Vec& v) {
          for (const auto& x : v)
            if (!K_.is_zero(x)) return true;
          return false;
        };
        std::string where = b.to_string() + " relation " + std::to_string(r);
        for (VarIndex v = 0; v < ctx_->variable_count(); ++v) {
          Bidegree up = b + ctx_->bidegree(v);
          if (vanishes(up) || !pieces_.count(up)) continue;
          if (nonzero(reduce(up, rel.times(ctx_->var(v)))))
            out.push_back(where + " times " + ctx_->variable(v).to_string() + " is not a relation");
        }
        Bidegree down{b.i - 2, b.j};
        if (mode_ == Mode::TTilde && !vanishes(down) && pieces_.count(down) && nonzero(reduce(down, apply_F(*ctx_, rel))))
          out.push_back(where + ": F image is not a relation");
      }
    return out;
  }

  // Violations of the reflection i -> 2g - i on every fully computed column.
  std::vector<std::string> fourier_symmetry_check() const {
    std::vector<std::string> out;
    const int g = ctx_->genus();
    for (const auto& [b, p] : pieces_) {
      Bidegree r{2 * g - b.i, b.j};
      auto it = pieces_.find(r);
      if (it != pieces_.end() && it->second.dim() != p.dim())
        out.push_back("dim" + b.to_string() + " = " + std::to_string(p.dim()) + " but dim" + r.to_string() + " = " +
                      std::to_string(it->second.dim()));
    }
    int max_j = 0;
    for (const auto& [b, p] : pieces_) max_j = std::max(max_j, b.j);
    for (int j = 0; j <= max_j; ++j) {
      if (!column_available(j)) continue;
      auto W = fourier_matrix(j);
      for (const auto& [i, blocks] : W) {
        int ri = 2 * g - i;
        std::string where = "column " + std::to_string(j) + ", i = " + std::to_string(i);
        for (const auto& [i2, M] : blocks) {
          if (i2 == ri) continue;
          for (const auto& x : M.data)
            if (!K_.is_zero(x)) {
              out.push_back(where + ": Fourier image leaves the reflected piece");
              break;
            }
        }
        const auto& M = blocks.at(ri);
        if (M.rows != M.cols || matrix_rank(K_, M) != M.cols) out.push_back(where + ": Fourier block not invertible");
        // The square acts by (-1)^(i - g).
        const auto& back = W.at(ri).at(i);
        T sign = ((i - g) % 2 == 0) ? K_.one() : K_.neg(K_.one());
        bool ok = back.cols == M.rows && back.rows == M.cols;
        for (std::size_t r = 0; ok && r < M.cols; ++r)
          for (std::size_t c = 0; ok && c < M.cols; ++c) {
            T acc = K_.zero();
            for (std::size_t k = 0; k < M.rows; ++k) K_.axpy(acc, back.at(r, k), M.at(k, c));
            if (acc != (r == c ? sign : K_.zero())) ok = false;
          }
        if (!ok) out.push_back(where + ": Fourier square is not (-1)^(i-g)");
      }
    }
    return out;
  }

 private:
  const Piece& require(Bidegree b) const {
    auto it = pieces_.find(b);
    if (it == pieces_.end()) throw PreconditionError("bidegree " + b.to_string() + " has not been computed");
    return it->second;
  }

  ContextPtr ctx_;
  Mode mode_;
  Field K_;
  std::map<Bidegree, Piece> pieces_;
  int max_codim_ = 0;
  int completed_codim_ = -1;
};

// Dimensions of R^i(C^[n]) for 0 <= i <= g - 1 + n from the dimensions of the
// full ring by codimension (0..2g-1). Requires n >= 2g - 1.
std::vector<std::size_t> sympow_dimensions(int g, int n, const std::vector<std::size_t>& ttilde_dims);

struct TransferReport {
  int genus = 0;
  int n = 0;
  bool gorenstein = false;
  std::vector<std::string> defects;  // "degree d: k missing (codim a block, xi^j)"
  std::string note;
};

TransferReport gorenstein_transfer(const PairingReport& ttilde, int g, int n);

}  // namespace tautring
