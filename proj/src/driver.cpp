#include "tautring/driver.hpp"

#include <iostream>
#include <memory>

#include "tautring/cache.hpp"
#include "tautring/pushforward.hpp"
#include "tautring/version.hpp"

namespace tautring {

RunOptions run_options_from(const JobConfig& cfg) {
  RunOptions o;
  o.genus = cfg.genus;
  o.mode = (cfg.mode == "sympow" || cfg.mode == "house") ? Mode::TTilde : parse_mode(cfg.mode);
  o.max_codim = cfg.max_codim;
  o.threads = cfg.threads;
  o.policy = cfg.policy;
  o.prime_seed = cfg.prime_seed;
  o.nu_window = cfg.nu_window;
  o.time_limit = cfg.time_limit;
  o.cache_dir = cfg.cache_dir;
  return o;
}

std::string nu_policy_text(int window, bool verified) {
  std::string s = "closure of lower relations plus F-images from the first level above 2g";
  s += "; reference window " + std::to_string(window);
  if (verified) s += " (verified)";
  return s;
}

namespace {

void say(const RunOptions& o, const std::string& s) {
  if (o.log) o.log(s);
}

template <class Field>
struct Pieces {
  std::map<Bidegree, ReducedPiece<Field>> pieces;
  int completed = -1;
  bool ok = true;
};

// Relation spaces of a ring through cap, from the cache when every bidegree is
// there, otherwise from the engine.
template <class Field>
Pieces<Field> obtain(const RunOptions& o, const ContextPtr& ctx, Mode mode, const Field& K, int cap) {
  Pieces<Field> out;
  auto order = schedule(*ctx, mode, cap);
  std::unique_ptr<RelationCache> cache;
  if (!o.cache_dir.empty()) {
    cache = std::make_unique<RelationCache>(o.cache_dir, [&](const std::string& s) { say(o, "warning: " + s); });
    bool all = true;
    for (Bidegree b : order) {
      auto rb = cache->get(*ctx, make_cache_key(ctx->genus(), mode, b, K.id()));
      if (!rb) {
        all = false;
        break;
      }
      out.pieces.emplace(b, from_relation_basis(K, *rb));
    }
    if (all) {
      out.completed = cap;
      say(o, to_string(mode) + " g=" + std::to_string(ctx->genus()) + " over " + K.id() + ": cache hit");
      return out;
    }
    out.pieces.clear();
  }
  say(o, to_string(mode) + " g=" + std::to_string(ctx->genus()) + " over " + K.id() + ": computing to codim " +
             std::to_string(cap));
  EngineOptions eo;
  eo.max_codim = cap;
  eo.threads = o.threads;
  eo.time_limit_seconds = o.time_limit;
  RelationEngine<Field> eng(ctx, mode, K, eo);
  out.ok = eng.run();
  out.completed = eng.completed_codim();
  out.pieces = eng.take_pieces();
  if (!out.ok) say(o, "resource limit reached after codim " + std::to_string(out.completed));
  if (cache)
    for (const auto& [b, p] : out.pieces) cache->put(*ctx, make_cache_key(ctx->genus(), mode, b, K.id()), to_relation_basis(*ctx, mode, K, p));
  return out;
}

int default_cap(const RunOptions& o) {
  return o.max_codim >= 0 ? o.max_codim : socle_codim(o.mode, o.genus);
}

// One evaluation of the analysis over a field.
template <class Field>
AnalysisReport analyse(const RunOptions& o, const ContextPtr& ctx, const Field& K) {
  const int cap = default_cap(o);
  AnalysisReport rep;
  if (o.mode == Mode::Mg) {
    Pieces<Field> base = obtain(o, ctx, Mode::RTilde, K, cap + 1);
    int done = base.completed;
    Quotient<Field> rt(ctx, Mode::RTilde, K, std::move(base.pieces), cap + 1, done);
    auto ring = MgRing<Field>::build(rt, cap);
    rep.table = ring.dimension_table();
    auto bad = ring.closure_check();
    if (!bad.empty()) throw IntegrityError("kappa relations are not an ideal: " + bad.front());
    if (ring.completed_codim() >= socle_codim(Mode::Mg, o.genus)) rep.pairing = ring.pairing_report();
    return rep;
  }
  Pieces<Field> got = obtain(o, ctx, o.mode, K, cap);
  Quotient<Field> q(ctx, o.mode, K, std::move(got.pieces), cap, got.completed);
  rep.table = q.dimension_table();
  if (q.completed_codim() >= socle_codim(o.mode, o.genus)) rep.pairing = q.pairing_report();
  return rep;
}

// Everything in a report that must agree between primes.
std::string signature(const AnalysisReport& r) {
  AnalysisReport s = r;
  s.engine = {};
  return report_json(s);
}

std::size_t rank_weight(const AnalysisReport& r) {
  std::size_t w = 0;
  for (const auto& d : r.table.records) w += d.relation_rank;
  w *= 1000003;
  if (r.pairing)
    for (const auto& p : r.pairing->pairings) w += p.rank;
  return w;
}

void verify_against_reference(const RunOptions& o, const ContextPtr& ctx, const AnalysisReport& exact) {
  Mode mode = o.mode == Mode::Mg ? Mode::RTilde : o.mode;
  int cap = o.mode == Mode::Mg ? default_cap(o) + 1 : default_cap(o);
  cap = std::min(cap, exact.table.completed_codim + (o.mode == Mode::Mg ? 1 : 0));
  say(o, "checking against the direct construction with window " + std::to_string(o.nu_window));
  FOperator F(ctx);
  std::map<Bidegree, ReducedPiece<RationalField>> ref;
  for (Bidegree b : schedule(*ctx, mode, cap))
    ref.emplace(b, reference_relation_space(*ctx, mode, b, ref, o.nu_window, F).piece);
  RunOptions eo = o;
  eo.mode = mode;
  eo.max_codim = cap;
  auto eng = obtain(eo, ctx, mode, RationalField(), cap);
  for (const auto& [b, p] : ref) {
    auto it = eng.pieces.find(b);
    if (it == eng.pieces.end() || it->second.pivots != p.pivots || it->second.nf != p.nf)
      throw IntegrityError("engine and direct construction differ at " + b.to_string());
  }
}

AnalysisReport run_exact(const RunOptions& o, const ContextPtr& ctx) {
  auto rep = analyse(o, ctx, RationalField());
  if (o.verify_reference) verify_against_reference(o, ctx, rep);
  rep.engine.linalg = "exact";
  return rep;
}

}  // namespace

double generator_entries(const AlgebraContext& ctx, Mode mode, int cap) {
  double n = 0;
  for (Bidegree b : schedule(ctx, mode, cap))
    n += static_cast<double>(ctx.count({top_level(ctx, b.i), b.j})) * static_cast<double>(ctx.count(b));
  return n;
}

AnalysisReport run_analysis(const RunOptions& o) {
  if (o.genus < 1) throw InputError("genus must be positive");
  if (o.mode == Mode::Mg && o.genus < 2) throw InputError("the kappa ring needs genus at least 2");
  auto ctx = AlgebraContext::make(o.genus);
  AnalysisReport out;
  if (o.policy == LinalgPolicy::Exact) {
    out = run_exact(o, ctx);
  } else {
    PrimeStream stream(o.prime_seed);
    std::vector<std::pair<std::uint64_t, AnalysisReport>> runs;
    auto run_prime = [&](std::uint64_t p) {
      try {
        PrimeField K(p);
        runs.emplace_back(p, analyse(o, ctx, K));
      } catch (const PreconditionError& e) {
        say(o, "prime " + std::to_string(p) + " rejected: " + e.what());
      }
    };
    Mode m = o.mode == Mode::Mg ? Mode::RTilde : o.mode;
    int cap = default_cap(o) + (o.mode == Mode::Mg ? 1 : 0);
    if (o.policy == LinalgPolicy::Auto && generator_entries(*ctx, m, cap) <= o.auto_threshold) {
      out = run_exact(o, ctx);
    } else {
      run_prime(stream.next());
      bool decided = false;
      while (!decided) {
        if (!runs.empty() && !runs.back().second.table.complete) {
          // Partial tables are reported as they are.
          out = runs.back().second;
          out.engine.primes = {runs.back().first};
          decided = true;
          break;
        }
        if (runs.size() >= 2) {
          std::map<std::string, std::vector<std::size_t>> groups;
          for (std::size_t k = 0; k < runs.size(); ++k) groups[signature(runs[k].second)].push_back(k);
          // Reductions mod p can only lose rank; take the heaviest outcome.
          const std::vector<std::size_t>* best = nullptr;
          std::size_t best_w = 0;
          for (const auto& [sig, idx] : groups) {
            std::size_t w = rank_weight(runs[idx.front()].second);
            if (!best || w > best_w) best = &idx, best_w = w;
          }
          if (best->size() >= 2) {
            out = runs[best->front()].second;
            for (auto k : *best) out.engine.primes.push_back(runs[k].first);
            if (groups.size() > 1) say(o, "warning: primes disagreed; " + std::to_string(best->size()) + " of " + std::to_string(runs.size()) + " agree on the highest ranks");
            decided = true;
            break;
          }
        }
        if (runs.size() >= o.max_primes)
          throw IntegrityError("no two of " + std::to_string(runs.size()) + " primes agree on the relation ranks");
        run_prime(stream.next());
      }
      out.engine.linalg = "modular";
      if (o.verify_reference) verify_against_reference(o, ctx, out);
    }
  }
  out.engine.version = kEngineVersion;
  out.engine.primes_seed = o.prime_seed;
  out.engine.nu_policy = nu_policy_text(o.nu_window, o.verify_reference);
  return out;
}

namespace {

template <class Field>
Quotient<Field> quotient(const RunOptions& o, const Field& K) {
  if (o.mode == Mode::Mg) throw PreconditionError("the kappa ring is not a quotient of the polynomial algebra");
  auto ctx = AlgebraContext::make(o.genus);
  int cap = default_cap(o);
  auto got = obtain(o, ctx, o.mode, K, cap);
  return Quotient<Field>(ctx, o.mode, K, std::move(got.pieces), cap, got.completed);
}

}  // namespace

Quotient<RationalField> rational_quotient(const RunOptions& opts) { return quotient(opts, RationalField()); }
Quotient<PrimeField> prime_quotient(const RunOptions& opts, std::uint64_t p) { return quotient(opts, PrimeField(p)); }

SympowReport run_sympow(const RunOptions& opts, int n) {
  RunOptions o = opts;
  o.mode = Mode::TTilde;
  o.max_codim = socle_codim(Mode::TTilde, o.genus);
  if (n < 2 * o.genus - 1) throw InputError("symmetric powers need n >= 2g - 1 = " + std::to_string(2 * o.genus - 1));
  auto a = run_analysis(o);
  if (!a.table.complete || !a.pairing) throw ResourceAbort("the full ring did not reach its socle");
  SympowReport r;
  r.genus = o.genus;
  r.n = n;
  r.dims = sympow_dimensions(o.genus, n, a.table.dims_by_codim());
  r.socle_degree = o.genus - 1 + n;
  r.socle_dim = r.dims.back();
  r.transfer = gorenstein_transfer(*a.pairing, o.genus, n);
  r.ttilde = *a.pairing;
  r.engine = a.engine;
  return r;
}

DimensionTable run_house_dims(const RunOptions& opts) {
  RunOptions o = opts;
  o.mode = Mode::TTilde;
  return run_analysis(o).table;
}

}  // namespace tautring
