#pragma once

#include <functional>
#include <string>

#include "tautring/config.hpp"
#include "tautring/report.hpp"

namespace tautring {

struct RunOptions {
  int genus = 2;
  Mode mode = Mode::TTilde;
  int max_codim = -1;  // -1: the socle codimension
  unsigned threads = 1;
  LinalgPolicy policy = LinalgPolicy::Auto;
  std::uint64_t prime_seed = kDefaultPrimeSeed;
  int nu_window = 3;
  bool verify_reference = false;  // recompute over Q by direct iteration and compare
  double time_limit = 0;
  std::string cache_dir;
  double auto_threshold = 50000;  // generator matrix entries up to which auto goes exact
  std::size_t max_primes = 6;
  std::function<void(const std::string&)> log;  // progress and warnings
};

RunOptions run_options_from(const JobConfig& cfg);

// Dimension table, and the pairing report once the socle is reached. Throws
// IntegrityError when prime runs cannot be reconciled. A resource stop gives
// a table with complete == false.
AnalysisReport run_analysis(const RunOptions& opts);

// Quotient rings behind a run, through opts.max_codim (default the socle);
// the relation spaces come from the cache when possible.
Quotient<RationalField> rational_quotient(const RunOptions& opts);
Quotient<PrimeField> prime_quotient(const RunOptions& opts, std::uint64_t p);

// Full ring through its socle, then the symmetric power profile.
SympowReport run_sympow(const RunOptions& opts, int n);

// Dimensions of the full ring for the house diagram, up to max_codim.
DimensionTable run_house_dims(const RunOptions& opts);

std::string nu_policy_text(int window, bool verified);

// Dense size of the generator rows against the monomial columns, summed
// over the bidegrees up to cap. Auto policy compares it with the threshold.
double generator_entries(const AlgebraContext& ctx, Mode mode, int cap);

}  // namespace tautring
