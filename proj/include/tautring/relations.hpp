#pragma once

#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

#include "tautring/algebra.hpp"
#include "tautring/field.hpp"
#include "tautring/linalg.hpp"
#include "tautring/sl2.hpp"

namespace tautring {

enum class Mode { RTilde, TTilde, Mg };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

// Codimension of the socle: 2g-1 for the full ring, g-1 for the column
// zero ring, g-2 for the kappa ring.
int socle_codim(Mode mode, int genus);

// Bidegrees handled for a mode up to the given codimension, in processing
// order (by codimension, then by i).
std::vector<Bidegree> schedule(const AlgebraContext& ctx, Mode mode, int max_codim);

// Smallest level above 2g with the parity of i.
inline int top_level(const AlgebraContext& ctx, int i) {
  return 2 * ctx.genus() + ((i % 2) ? 1 : 2);
}

struct GeneratorDescriptor {
  std::string kind;  // "closure" or "pure"
  Monomial source;
  int nu = 0;
  Monomial multiplier;
};

// Relation space of one bidegree in reduced echelon form over a field.
template <class Field>
struct ReducedPiece {
  using T = typename Field::value_type;

  Bidegree bidegree{};
  std::vector<Monomial> ambient;
  std::unordered_map<Monomial, std::uint32_t, MonomialHash> index;
  std::vector<std::int32_t> std_pos;     // column -> standard position, -1 for pivots
  std::vector<std::int32_t> row_of_col;  // column -> row, -1 for standard columns
  std::vector<std::uint32_t> standard;   // standard columns, ascending
  std::vector<std::uint32_t> pivots;     // pivot columns, ascending
  std::vector<SparseVec<T>> nf;          // normal form of pivots[r] in standard positions
  std::size_t closure_rank = 0;
  std::size_t pure_rank = 0;
  std::vector<GeneratorDescriptor> provenance;

  std::size_t dim() const { return standard.size(); }
  std::size_t rank() const { return pivots.size(); }
  std::size_t size() const { return ambient.size(); }

  std::int32_t column(const Monomial& m) const {
    auto it = index.find(m);
    return it == index.end() ? -1 : static_cast<std::int32_t>(it->second);
  }

  // acc += c * NF(ambient[col]); acc has length dim().
  void add_nf(const Field& K, std::vector<T>& acc, std::uint32_t col, const T& c) const {
    std::int32_t s = std_pos[col];
    if (s >= 0) {
      acc[s] = K.add(acc[s], c);
    } else {
      for (const auto& [p, v] : nf[row_of_col[col]]) K.axpy(acc[p], c, v);
    }
  }

  void set_ambient(std::vector<Monomial> monos) {
    ambient = std::move(monos);
    index.clear();
    index.reserve(ambient.size());
    for (std::uint32_t k = 0; k < ambient.size(); ++k) index.emplace(ambient[k], k);
  }

  // Fills std_pos, row_of_col and standard from pivots.
  void finalize_columns() {
    std_pos.assign(ambient.size(), -1);
    row_of_col.assign(ambient.size(), -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) row_of_col[pivots[r]] = static_cast<std::int32_t>(r);
    standard.clear();
    for (std::uint32_t c = 0; c < ambient.size(); ++c)
      if (row_of_col[c] < 0) {
        std_pos[c] = static_cast<std::int32_t>(standard.size());
        standard.push_back(c);
      }
  }
};

// Field independent view of a relation space: reduced echelon rows over the
// ordered monomial basis, entries written as text.
struct RelationBasis {
  int genus = 0;
  Mode mode = Mode::TTilde;
  std::string field = "Q";
  Bidegree bidegree{};
  std::vector<Monomial> monomials;
  std::vector<std::uint32_t> pivots;
  std::vector<std::vector<std::pair<std::uint32_t, std::string>>> rows;  // tails
  std::size_t closure_rank = 0;
  std::size_t pure_rank = 0;
  std::vector<GeneratorDescriptor> provenance;

  std::size_t rank() const { return pivots.size(); }
  std::size_t dim() const { return monomials.size() - pivots.size(); }
};

template <class Field>
RelationBasis to_relation_basis(const AlgebraContext& ctx, Mode mode, const Field& K,
                                const ReducedPiece<Field>& piece) {
  RelationBasis rb;
  rb.genus = ctx.genus();
  rb.mode = mode;
  rb.field = K.id();
  rb.bidegree = piece.bidegree;
  rb.monomials = piece.ambient;
  rb.pivots = piece.pivots;
  rb.closure_rank = piece.closure_rank;
  rb.pure_rank = piece.pure_rank;
  rb.provenance = piece.provenance;
  for (const auto& row : piece.nf) {
    std::vector<std::pair<std::uint32_t, std::string>> t;
    for (const auto& [p, v] : row) t.emplace_back(piece.standard[p], K.to_string(K.neg(v)));
    rb.rows.push_back(std::move(t));
  }
  return rb;
}

template <class Field>
ReducedPiece<Field> from_relation_basis(const Field& K, const RelationBasis& rb) {
  if (rb.field != K.id()) throw PreconditionError("relation basis field " + rb.field + " does not match " + K.id());
  ReducedPiece<Field> piece;
  piece.bidegree = rb.bidegree;
  piece.set_ambient(rb.monomials);
  piece.pivots = rb.pivots;
  piece.closure_rank = rb.closure_rank;
  piece.pure_rank = rb.pure_rank;
  piece.provenance = rb.provenance;
  piece.finalize_columns();
  for (const auto& row : rb.rows) {
    SparseVec<typename Field::value_type> nf;
    for (const auto& [c, s] : row) {
      if (c >= piece.size() || piece.std_pos[c] < 0) throw IntegrityError("relation row refers to a pivot column");
      nf.emplace_back(piece.std_pos[c], K.neg(K.parse(s)));
    }
    piece.nf.push_back(std::move(nf));
  }
  if (piece.nf.size() != piece.pivots.size()) throw IntegrityError("relation basis row count mismatch");
  return piece;
}

// Pure generators F^{g+1}(m) of the column zero ring at codimension i, one per
// X20-free monomial m of bidegree (2g+2, 2i).
std::vector<Polynomial> rtilde_generators(const AlgebraContext& ctx, int i);

// Direct construction used as an oracle: pure images F^nu(M) over increasing
// nu past the first admissible one until the span is unchanged for `window`
// consecutive steps, plus the closure of the given lower relation spaces.
struct ReferenceResult {
  ReducedPiece<RationalField> piece;
  int last_nu = 0;
  int first_stable_nu = 0;
};
ReferenceResult reference_relation_space(
    const AlgebraContext& ctx, Mode mode, Bidegree b,
    const std::map<Bidegree, ReducedPiece<RationalField>>& lower, int window, FOperator& F);

struct EngineOptions {
  int max_codim = 0;
  unsigned threads = 1;
  double time_limit_seconds = 0;       // 0 disables the check
  std::size_t max_core_monomials = 0;  // 0 disables the check
};

class ResourceAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Computes the relation spaces bidegree by bidegree. Besides the closure of
// lower relations, each bidegree needs the images F^nu(M) of the monomials M
// at the first level above 2g. These are evaluated modulo the closure by
// following the F-expansion of monomials without column zero or x[2,0]
// factors ("core" monomials) down the column, and images that land in lower
// bidegrees are read from vectors stored when those bidegrees were done.
template <class Field>
class RelationEngine {
 public:
  using T = typename Field::value_type;
  using Piece = ReducedPiece<Field>;

  RelationEngine(ContextPtr ctx, Mode mode, Field K, EngineOptions opts)
      : ctx_(std::move(ctx)), mode_(mode), K_(std::move(K)), opts_(opts) {
    if (mode_ == Mode::Mg) throw PreconditionError("the relation engine handles rtilde and ttilde only");
  }

  const AlgebraContext& context() const { return *ctx_; }
  const Field& field() const { return K_; }
  Mode mode() const { return mode_; }

  // Returns false when a resource limit stopped the run; completed_codim()
  // then tells how far it got.
  bool run() {
    auto start = std::chrono::steady_clock::now();
    auto order = schedule(*ctx_, mode_, opts_.max_codim);
    std::size_t pos = 0;
    while (pos < order.size()) {
      int c = order[pos].codim();
      std::vector<Bidegree> batch;
      while (pos < order.size() && order[pos].codim() == c) batch.push_back(order[pos++]);
      if (opts_.time_limit_seconds > 0) {
        double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (el > opts_.time_limit_seconds) return false;
      }
      try {
        prepare(batch);
      } catch (const ResourceAbort&) {
        return false;
      }
      run_batch(batch);
      completed_codim_ = c;
    }
    return true;
  }

  int completed_codim() const { return completed_codim_; }

  const Piece* piece(Bidegree b) const {
    auto it = pieces_.find(b);
    return it == pieces_.end() ? nullptr : &it->second->piece;
  }

  std::vector<Bidegree> bidegrees() const {
    std::vector<Bidegree> out;
    for (const auto& [b, s] : pieces_)
      if (s->done) out.push_back(b);
    return out;
  }

  std::map<Bidegree, Piece> take_pieces() {
    std::map<Bidegree, Piece> out;
    for (auto& [b, s] : pieces_)
      if (s->done) out.emplace(b, std::move(s->piece));
    pieces_.clear();
    return out;
  }

  std::size_t core_monomial_count() const { return core_total_; }

 private:
  struct CoreRef {
    std::int32_t level;
    std::int32_t column;
    std::uint32_t local;
  };

  struct ResolvedTerm {
    T coef;
    std::int32_t mu;  // index into mu_registry_, -1 for the unit
    std::int32_t mu_j;
    std::uint32_t x20;
    std::int32_t level;
    std::uint32_t local;
  };

  struct Column {
    int base = 0;                               // lowest level registered
    int top = 0;
    std::vector<std::vector<Monomial>> levels;  // levels[(L - base) / 2]
    std::vector<std::vector<std::vector<ResolvedTerm>>> expansion;
    std::vector<std::vector<char>> expanded;
  };

  struct VStore {
    int base = 0;
    int top = 0;  // exclusive
    std::size_t dim = 0;
    std::vector<std::vector<T>> levels;
  };

  struct State {
    Piece piece;
    VStore v;
    bool done = false;
  };

  // ------------------------------------------------------------ bookkeeping

  void prepare(const std::vector<Bidegree>& batch) {
    for (Bidegree b : batch) {
      pieces_.emplace(b, std::make_unique<State>());
      register_column(b.j, b.i % 2);
    }
    for (Bidegree b : batch) {
      // Lower columns reached through F-expansion must be registered too.
      for (int jj = b.j % 2; jj < b.j; jj += 2) register_column(jj, b.i % 2);
    }
  }

  void register_column(int j, int parity) {
    auto key = std::make_pair(j, parity);
    if (columns_.count(key)) return;
    Column col;
    col.base = parity;
    col.top = top_level(*ctx_, parity);
    auto exclude = [this](VarIndex v) { return !ctx_->is_core(v); };
    std::size_t added = 0;
    for (int L = col.base; L <= col.top; L += 2) {
      auto monos = ctx_->enumerate({L, j}, exclude);
      added += monos.size();
      col.levels.push_back(std::move(monos));
    }
    if (opts_.max_core_monomials && core_total_ + added > opts_.max_core_monomials)
      throw ResourceAbort("core monomial budget exceeded");
    core_total_ += added;
    for (int L = col.base; L <= col.top; L += 2) {
      const auto& lv = col.levels[(L - col.base) / 2];
      for (std::uint32_t k = 0; k < lv.size(); ++k) core_index_.emplace(lv[k], CoreRef{L, j, k});
    }
    col.expansion.resize(col.levels.size());
    col.expanded.resize(col.levels.size());
    if (cache_expansions()) {
      for (std::size_t l = 0; l < col.levels.size(); ++l) {
        col.expansion[l].resize(col.levels[l].size());
        col.expanded[l].assign(col.levels[l].size(), 0);
      }
    }
    columns_.emplace(key, std::move(col));
  }

  bool cache_expansions() const { return mode_ == Mode::TTilde; }

  void run_batch(const std::vector<Bidegree>& batch) {
    unsigned nthreads = std::max(1u, std::min<unsigned>(opts_.threads, batch.size()));
    if (nthreads == 1) {
      for (Bidegree b : batch) compute(b);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < nthreads; ++t) {
      workers.emplace_back([&] {
        while (true) {
          std::size_t k = next.fetch_add(1);
          if (k >= batch.size()) return;
          try {
            compute(batch[k]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    if (err) std::rethrow_exception(err);
  }

  std::int32_t mu_id(const Monomial& mu) {
    if (mu.is_unit()) return -1;
    std::lock_guard<std::mutex> lock(mu_mutex_);
    auto it = mu_index_.find(mu);
    if (it != mu_index_.end()) return it->second;
    auto id = static_cast<std::int32_t>(mu_registry_.size());
    mu_registry_.push_back(mu);
    mu_index_.emplace(mu, id);
    return id;
  }

  Monomial mu_monomial(std::int32_t id) {
    if (id < 0) return Monomial();
    std::lock_guard<std::mutex> lock(mu_mutex_);
    return mu_registry_[id];
  }

  std::vector<ResolvedTerm> resolve(const Monomial& n) {
    std::vector<ResolvedTerm> out;
    for (auto& t : split_F_image(*ctx_, n)) {
      auto it = core_index_.find(t.core);
      if (it == core_index_.end()) throw PreconditionError("core monomial not registered: " + ctx_->to_string(t.core));
      out.push_back({K_.from_int(t.coef), mu_id(t.mu), t.mu.bidegree().j, t.x20, it->second.level,
                     it->second.local});
    }
    return out;
  }

  const std::vector<ResolvedTerm>& expansion(Column& col, int L, std::uint32_t local,
                                             std::vector<ResolvedTerm>& scratch) {
    std::size_t l = (L - col.base) / 2;
    if (!cache_expansions()) {
      scratch = resolve(col.levels[l][local]);
      return scratch;
    }
    if (!col.expanded[l][local]) {
      col.expansion[l][local] = resolve(col.levels[l][local]);
      col.expanded[l][local] = 1;
    }
    return col.expansion[l][local];
  }

  // ------------------------------------------------------------ computation

  struct Work {
    Bidegree b;
    Echelon<Field>* closure = nullptr;
    std::vector<std::int32_t> free_pos;  // column -> position among free columns
    std::size_t q = 0;
    std::map<std::tuple<int, int, int>, std::vector<T>> lowering;
    std::map<std::pair<Bidegree, std::pair<std::int32_t, unsigned>>, std::vector<T>> mult;
  };

  const std::vector<T>& lowering(Work& w, int n, int a, int lambda) {
    auto key = std::make_tuple(n, a, lambda);
    auto it = w.lowering.find(key);
    if (it != w.lowering.end()) return it->second;
    return w.lowering.emplace(key, lowering_coefficients(K_, n, a, lambda)).first->second;
  }

  // acc += c * NF_closure(column col) in free coordinates.
  void add_closure_nf(Work& w, std::vector<T>& acc, std::uint32_t col, const T& c) {
    std::int32_t p = w.free_pos[col];
    if (p >= 0) {
      acc[p] = K_.add(acc[p], c);
      return;
    }
    T nc = K_.neg(c);
    for (const auto& [t, v] : w.closure->tail(col)) K_.axpy(acc[w.free_pos[t]], nc, v);
  }

  const State& state(Bidegree b) const { return *pieces_.at(b); }

  // Matrix (dim(b') x q) of NF_closure(mu x20^e s) over standard monomials s of b'.
  const std::vector<T>& mult_matrix(Work& w, Bidegree bp, std::int32_t mu, unsigned e) {
    auto key = std::make_pair(bp, std::make_pair(mu, e));
    auto it = w.mult.find(key);
    if (it != w.mult.end()) return it->second;
    const Piece& lower = state(bp).piece;
    Monomial mult = mu_monomial(mu) * ctx_->var_power(ctx_->x20_index(), e);
    const Piece& cur = pieces_.at(w.b)->piece;
    std::vector<T> M(lower.dim() * w.q, K_.zero());
    for (std::size_t s = 0; s < lower.dim(); ++s) {
      Monomial prod = lower.ambient[lower.standard[s]] * mult;
      std::int32_t col = cur.column(prod);
      if (col < 0) throw PreconditionError("product outside the ambient basis");
      std::vector<T> row(w.q, K_.zero());
      add_closure_nf(w, row, static_cast<std::uint32_t>(col), K_.one());
      std::copy(row.begin(), row.end(), M.begin() + s * w.q);
    }
    return w.mult.emplace(key, std::move(M)).first->second;
  }

  const T* stored_vector(Bidegree bp, int level, std::uint32_t local) const {
    const VStore& v = state(bp).v;
    if (level < v.base || level >= v.top) throw PreconditionError("stored image missing");
    return v.levels[(level - v.base) / 2].data() + static_cast<std::size_t>(local) * v.dim;
  }

  // acc += c * mu x20^e * V(b', level, local)
  void add_lower(Work& w, std::vector<T>& acc, const T& c, Bidegree bp, std::int32_t mu,
                 unsigned e, int level, std::uint32_t local) {
    const VStore& vs = state(bp).v;
    if (vs.dim == 0) return;
    const T* x = stored_vector(bp, level, local);
    const std::vector<T>* M = nullptr;
    for (std::size_t s = 0; s < vs.dim; ++s) {
      if (K_.is_zero(x[s])) continue;
      if (!M) M = &mult_matrix(w, bp, mu, e);
      T cs = K_.mul(c, x[s]);
      const T* row = M->data() + s * w.q;
      for (std::size_t t = 0; t < w.q; ++t)
        if (!K_.is_zero(row[t])) K_.axpy(acc[t], cs, row[t]);
    }
  }

  // F^t(N) modulo the closure for core N at level L of column b.j, t = (L - b.i)/2 >= 1,
  // using W for lower levels of the same column.
  std::vector<T> descend(Work& w, Column& col, const std::vector<std::vector<T>>& W, int L,
                         std::uint32_t local) {
    const Bidegree b = w.b;
    const int g = ctx_->genus();
    int t = (L - b.i) / 2;
    std::vector<T> acc(w.q, K_.zero());
    std::vector<ResolvedTerm> scratch;
    const auto& terms = expansion(col, L, local, scratch);
    // The level of the core factor is L - 2 - 2a, so the coefficients only depend on a.
    std::vector<const std::vector<T>*> by_a;
    for (const auto& term : terms) {
      int a = static_cast<int>(term.x20);
      int L2 = term.level;
      if (static_cast<std::size_t>(a) >= by_a.size()) by_a.resize(a + 1, nullptr);
      if (!by_a[a]) by_a[a] = &lowering(w, t - 1, a, L2 - g);
      const auto& ck = *by_a[a];
      for (int k = 0; k <= std::min(t - 1, a); ++k) {
        if (K_.is_zero(ck[k])) continue;
        int e = a - k;
        int ip = b.i - 2 * e;
        if (ip < 0) continue;
        T c = K_.mul(term.coef, ck[k]);
        if (term.mu < 0 && e == 0) {
          const T* x = W[(L2 - b.i) / 2].data() + static_cast<std::size_t>(term.local) * w.q;
          for (std::size_t s = 0; s < w.q; ++s)
            if (!K_.is_zero(x[s])) K_.axpy(acc[s], c, x[s]);
        } else {
          Bidegree bp{ip, b.j - term.mu_j};
          add_lower(w, acc, c, bp, term.mu, static_cast<unsigned>(e), L2, term.local);
        }
      }
    }
    return acc;
  }

  void compute(Bidegree b) {
    State& st = *pieces_.at(b);
    Piece& piece = st.piece;
    piece.bidegree = b;
    piece.set_ambient(ctx_->enumerate(b));
    const std::size_t n = piece.size();

    // Closure of lower relations.
    Echelon<Field> C(K_, n);
    std::vector<GeneratorDescriptor> prov;
    for (VarIndex v = 0; v < ctx_->variable_count(); ++v) {
      Bidegree vb = ctx_->bidegree(v);
      Bidegree bp = b - vb;
      if (bp.i < 0 || bp.j < 0) continue;
      auto it = pieces_.find(bp);
      if (it == pieces_.end() || !it->second->done) continue;
      const Piece& lower = it->second->piece;
      Monomial xv = ctx_->var(v);
      for (std::size_t r = 0; r < lower.pivots.size(); ++r) {
        SparseVec<T> row;
        row.emplace_back(piece.index.at(lower.ambient[lower.pivots[r]] * xv), K_.one());
        for (const auto& [s, val] : lower.nf[r])
          row.emplace_back(piece.index.at(lower.ambient[lower.standard[s]] * xv), K_.neg(val));
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        if (C.insert(row)) prov.push_back({"closure", lower.ambient[lower.pivots[r]], 0, xv});
      }
    }
    piece.closure_rank = C.rank();

    Work w;
    w.b = b;
    w.closure = &C;
    w.free_pos.assign(n, -1);
    auto free_cols = C.free_columns();
    for (std::size_t k = 0; k < free_cols.size(); ++k) w.free_pos[free_cols[k]] = static_cast<std::int32_t>(k);
    w.q = free_cols.size();

    const int I = top_level(*ctx_, b.i);
    const int nu = (I - b.i) / 2;
    Column& col = columns_.at({b.j, b.i % 2});
    const int g = ctx_->genus();

    // W[(L - b.i)/2]: F^{(L-b.i)/2}(N) modulo the closure, for L < I.
    std::vector<std::vector<T>> W;
    Echelon<Field> P(K_, w.q);
    if (w.q > 0) {
      for (int L = b.i; L < I; L += 2) {
        const auto& monos = col.levels[(L - col.base) / 2];
        std::vector<T> lv(monos.size() * w.q, K_.zero());
        for (std::uint32_t k = 0; k < monos.size(); ++k) {
          std::vector<T> v;
          if (L == b.i) {
            v.assign(w.q, K_.zero());
            add_closure_nf(w, v, piece.index.at(monos[k]), K_.one());
          } else {
            v = descend(w, col, W, L, k);
          }
          std::copy(v.begin(), v.end(), lv.begin() + static_cast<std::size_t>(k) * w.q);
        }
        W.push_back(std::move(lv));
      }

      // Pure images of the top level monomials x20^a N.
      const int amax = (mode_ == Mode::RTilde) ? 0 : I / 2;
      for (int a = 0; a <= amax; ++a) {
        int LN = I - 2 * a;
        if (LN < col.base) break;
        const auto& monos = col.levels[(LN - col.base) / 2];
        const auto& ck = lowering(w, nu, a, LN - g);
        for (std::uint32_t k = 0; k < monos.size(); ++k) {
          std::vector<T> v(w.q, K_.zero());
          for (int kk = 0; kk <= std::min(nu, a); ++kk) {
            if (K_.is_zero(ck[kk])) continue;
            int e = a - kk;
            int ip = b.i - 2 * e;
            if (ip < 0) continue;
            if (e == 0) {
              if (a == 0) {
                auto top = descend(w, col, W, I, k);
                for (std::size_t s = 0; s < w.q; ++s) K_.axpy(v[s], ck[kk], top[s]);
              } else {
                const T* x = W[(LN - b.i) / 2].data() + static_cast<std::size_t>(k) * w.q;
                for (std::size_t s = 0; s < w.q; ++s) K_.axpy(v[s], ck[kk], x[s]);
              }
            } else {
              add_lower(w, v, ck[kk], {ip, b.j}, -1, static_cast<unsigned>(e), LN, k);
            }
          }
          SparseVec<T> sv;
          for (std::size_t s = 0; s < w.q; ++s)
            if (!K_.is_zero(v[s])) sv.emplace_back(static_cast<std::uint32_t>(s), v[s]);
          if (P.insert(sv)) {
            Monomial M = monos[k] * ctx_->var_power(ctx_->x20_index(), a);
            prov.push_back({"pure", M, nu, Monomial()});
          }
          if (P.rank() == w.q) break;
        }
        if (P.rank() == w.q) break;
      }
    }
    piece.pure_rank = P.rank();
    piece.provenance = std::move(prov);

    // Assemble the reduced echelon form of closure + pure images.
    std::vector<std::int32_t> final_pos(w.q, -1);  // free position -> standard position
    std::size_t dim = 0;
    for (std::size_t s = 0; s < w.q; ++s)
      if (!P.is_pivot(static_cast<std::uint32_t>(s))) final_pos[s] = static_cast<std::int32_t>(dim++);
    std::map<std::uint32_t, SparseVec<T>> rows;  // pivot column -> normal form
    for (std::uint32_t pc : C.pivots()) {
      std::vector<T> tail(w.q, K_.zero());
      for (const auto& [c, v] : C.tail(pc)) tail[w.free_pos[c]] = K_.add(tail[w.free_pos[c]], v);
      rows.emplace(pc, to_normal_form(P, final_pos, tail));
    }
    for (std::uint32_t pp : P.pivots()) {
      std::vector<T> tail(w.q, K_.zero());
      for (const auto& [s, v] : P.tail(pp)) tail[s] = v;
      tail[pp] = K_.zero();
      rows.emplace(free_cols[pp], to_normal_form(P, final_pos, tail));
    }
    piece.pivots.clear();
    piece.nf.clear();
    for (auto& [pc, nf] : rows) {
      piece.pivots.push_back(pc);
      piece.nf.push_back(std::move(nf));
    }
    piece.finalize_columns();

    // Stored images for later bidegrees, in final standard coordinates.
    VStore& vs = st.v;
    vs.base = b.i;
    vs.top = I - 1;
    vs.dim = dim;
    if (dim > 0) {
      for (std::size_t l = 0; l < W.size(); ++l) {
        std::size_t count = W[l].size() / w.q;
        std::vector<T> out(count * dim, K_.zero());
        for (std::size_t k = 0; k < count; ++k) {
          SparseVec<T> sv;
          for (std::size_t s = 0; s < w.q; ++s) {
            const T& x = W[l][k * w.q + s];
            if (!K_.is_zero(x)) sv.emplace_back(static_cast<std::uint32_t>(s), x);
          }
          for (const auto& [s, x] : P.reduce(sv)) out[k * dim + final_pos[s]] = x;
        }
        vs.levels.push_back(std::move(out));
      }
    }
    st.done = true;
  }

  // Given a row tail (entries over free positions, the pivot already removed),
  // eliminate pure pivots and return the negated remainder in standard positions.
  SparseVec<T> to_normal_form(const Echelon<Field>& P, const std::vector<std::int32_t>& final_pos,
                              const std::vector<T>& tail) const {
    SparseVec<T> sv;
    for (std::size_t s = 0; s < tail.size(); ++s)
      if (!K_.is_zero(tail[s])) sv.emplace_back(static_cast<std::uint32_t>(s), tail[s]);
    SparseVec<T> out;
    for (const auto& [s, x] : P.reduce(sv)) out.emplace_back(final_pos[s], K_.neg(x));
    return out;
  }

  ContextPtr ctx_;
  Mode mode_;
  Field K_;
  EngineOptions opts_;
  std::map<Bidegree, std::unique_ptr<State>> pieces_;
  std::map<std::pair<int, int>, Column> columns_;
  std::unordered_map<Monomial, CoreRef, MonomialHash> core_index_;
  std::size_t core_total_ = 0;
  std::mutex mu_mutex_;
  std::vector<Monomial> mu_registry_;
  std::unordered_map<Monomial, std::int32_t, MonomialHash> mu_index_;
  int completed_codim_ = -1;
};

}  // namespace tautring
