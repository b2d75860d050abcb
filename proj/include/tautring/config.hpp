#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "tautring/linalg.hpp"

namespace tautring {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Json, Csv, Text, Svg };

OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

inline constexpr std::uint64_t kDefaultPrimeSeed = 0x7a75ull;

struct JobConfig {
  std::string command;      // compute, pairing, house, sympow, mg
  int genus = -1;
  std::string mode;         // rtilde, ttilde, mg, sympow, house
  int max_codim = -1;       // -1: up to the socle
  int n = -1;               // sympow only
  int dim = -1;             // house base dimension, -1: 3g - 2
  unsigned threads = 1;
  std::uint64_t prime_seed = kDefaultPrimeSeed;
  int nu_window = 3;
  std::string cache_dir;    // empty: no cache
  OutputFormat format = OutputFormat::Json;
  std::string out;          // empty: standard output
  LinalgPolicy policy = LinalgPolicy::Auto;
  double time_limit = 0;    // seconds, 0: none
  bool annotate = false;    // house: show dimensions
};

// key = value lines; '#' starts a comment. Unknown keys are usage errors.
void apply_config_text(JobConfig& cfg, const std::string& text, const std::string& origin = "config");
void apply_config_file(JobConfig& cfg, const std::filesystem::path& path);
// TAUTRING_THREADS, TAUTRING_PRIME_SEED, TAUTRING_CACHE_DIR.
void apply_environment(JobConfig& cfg,
                       const std::function<std::optional<std::string>(const std::string&)>& getenv_fn);
void apply_environment(JobConfig& cfg);

// Fills mode from the command where implied and checks ranges.
void validate(JobConfig& cfg);

}  // namespace tautring
