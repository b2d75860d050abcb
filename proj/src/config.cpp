#include "tautring/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace tautring {

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "text") return OutputFormat::Text;
  if (s == "svg") return OutputFormat::Svg;
  throw UsageError("unknown format '" + s + "' (expected json, csv, text or svg)");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Text: return "text";
    case OutputFormat::Svg: return "svg";
  }
  return "json";
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw UsageError(key + ": '" + v + "' is not an integer");
  return out;
}

void set_key(JobConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "genus") cfg.genus = parse_int<int>(key, v);
  else if (key == "mode") cfg.mode = v;
  else if (key == "max_codim") cfg.max_codim = parse_int<int>(key, v);
  else if (key == "n") cfg.n = parse_int<int>(key, v);
  else if (key == "dim") cfg.dim = parse_int<int>(key, v);
  else if (key == "threads") cfg.threads = parse_int<unsigned>(key, v);
  else if (key == "prime_seed" || key == "seed") cfg.prime_seed = parse_int<std::uint64_t>(key, v);
  else if (key == "nu_window") cfg.nu_window = parse_int<int>(key, v);
  else if (key == "cache_dir") cfg.cache_dir = v;
  else if (key == "format") cfg.format = parse_format(v);
  else if (key == "out") cfg.out = v;
  else if (key == "policy") {
    try {
      cfg.policy = parse_policy(v);
    } catch (const std::exception&) {
      throw UsageError("policy: unknown value '" + v + "'");
    }
  } else if (key == "time_limit") {
    try {
      cfg.time_limit = std::stod(v);
    } catch (const std::exception&) {
      throw UsageError("time_limit: '" + v + "' is not a number");
    }
  } else {
    throw UsageError("unknown configuration key '" + key + "'");
  }
}

}  // namespace

void apply_config_text(JobConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const UsageError& e) {
      throw UsageError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(JobConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError(path.string() + ": cannot read config file");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

void apply_environment(JobConfig& cfg,
                       const std::function<std::optional<std::string>(const std::string&)>& getenv_fn) {
  if (auto v = getenv_fn("TAUTRING_THREADS")) cfg.threads = parse_int<unsigned>("TAUTRING_THREADS", *v);
  if (auto v = getenv_fn("TAUTRING_PRIME_SEED")) cfg.prime_seed = parse_int<std::uint64_t>("TAUTRING_PRIME_SEED", *v);
  if (auto v = getenv_fn("TAUTRING_CACHE_DIR")) cfg.cache_dir = *v;
}

void apply_environment(JobConfig& cfg) {
  apply_environment(cfg, [](const std::string& k) -> std::optional<std::string> {
    const char* v = std::getenv(k.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  });
}

void validate(JobConfig& cfg) {
  static const std::set<std::string> commands{"compute", "pairing", "house", "sympow", "mg"};
  if (!commands.count(cfg.command)) throw UsageError("unknown command '" + cfg.command + "'");
  if (cfg.command == "house" || cfg.command == "sympow" || cfg.command == "mg") {
    if (!cfg.mode.empty() && cfg.mode != cfg.command)
      throw UsageError(cfg.command + ": mode '" + cfg.mode + "' does not apply");
    cfg.mode = cfg.command;
  }
  if (cfg.mode.empty()) cfg.mode = "ttilde";
  static const std::set<std::string> modes{"rtilde", "ttilde", "mg", "sympow", "house"};
  if (!modes.count(cfg.mode)) throw UsageError("unknown mode '" + cfg.mode + "'");
  if (cfg.command == "compute" || cfg.command == "pairing") {
    if (cfg.mode == "sympow" || cfg.mode == "house")
      throw UsageError(cfg.command + " takes mode rtilde, ttilde or mg");
  }
  if (cfg.genus < 1) throw UsageError("--genus must be a positive integer");
  if (cfg.genus > 64) throw UsageError("--genus above 64 is not supported");
  if (cfg.max_codim < -1) throw UsageError("--max-codim must be non-negative");
  if (cfg.threads < 1) throw UsageError("--threads must be positive");
  if (cfg.nu_window < 1) throw UsageError("nu_window must be positive");
  if (cfg.time_limit < 0) throw UsageError("time_limit must be non-negative");
  if (cfg.mode == "sympow") {
    if (cfg.n < 0) throw UsageError("sympow needs --n");
    if (cfg.n < 2 * cfg.genus - 1)
      throw UsageError("sympow: n = " + std::to_string(cfg.n) + " is below 2g - 1 = " + std::to_string(2 * cfg.genus - 1) +
                       "; the dimension formula only covers n >= 2g - 1");
  } else if (cfg.n >= 0) {
    throw UsageError("--n applies to sympow only");
  }
  if (cfg.mode == "house") {
    if (cfg.dim < -1) throw UsageError("--dim must be non-negative");
    if (cfg.format == OutputFormat::Csv) throw UsageError("house renders as text or svg");
    if (cfg.format == OutputFormat::Json) cfg.format = OutputFormat::Text;
  } else {
    if (cfg.dim >= 0) throw UsageError("--dim applies to house only");
    if (cfg.format == OutputFormat::Svg) throw UsageError("svg output is for house only");
  }
  if (cfg.mode == "mg" && cfg.genus < 2) throw UsageError("mg needs genus at least 2");
}

}  // namespace tautring
