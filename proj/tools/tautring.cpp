#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tautring/cache.hpp"
#include "tautring/driver.hpp"
#include "tautring/house.hpp"

using namespace tautring;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIntegrity = 3, kResource = 4 };

struct Flags {
  std::optional<int> genus, max_codim, n, dim, nu_window;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode, format, out, cache_dir, policy;
  std::optional<double> time_limit;
  std::string config;
  bool annotate = false, verify = false, quiet = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--genus,-g", f.genus, "genus g >= 1");
  sub->add_option("--mode", f.mode, "rtilde, ttilde or mg");
  sub->add_option("--max-codim", f.max_codim, "highest codimension (default: the socle)");
  sub->add_option("--format", f.format, "json, csv, text or svg");
  sub->add_option("--out,-o", f.out, "output file (default: standard output)");
  sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--seed", f.seed, "seed of the prime stream");
  sub->add_option("--cache-dir", f.cache_dir, "relation cache directory");
  sub->add_option("--config", f.config, "key = value configuration file");
  sub->add_option("--policy", f.policy, "exact, modular or auto");
  sub->add_option("--nu-window", f.nu_window, "stabilisation window of the direct construction");
  sub->add_option("--time-limit", f.time_limit, "seconds before a partial result is written");
  sub->add_flag("--verify", f.verify, "compare with the direct construction over Q");
  sub->add_flag("--quiet,-q", f.quiet, "no progress on standard error");
}

JobConfig build_config(const std::string& command, const Flags& f) {
  JobConfig c;
  c.command = command;
  if (!f.config.empty()) apply_config_file(c, f.config);
  apply_environment(c);
  if (f.genus) c.genus = *f.genus;
  if (f.mode) c.mode = *f.mode;
  if (f.max_codim) c.max_codim = *f.max_codim;
  if (f.n) c.n = *f.n;
  if (f.dim) c.dim = *f.dim;
  if (f.nu_window) c.nu_window = *f.nu_window;
  if (f.threads) c.threads = *f.threads;
  if (f.seed) c.prime_seed = *f.seed;
  if (f.format) c.format = parse_format(*f.format);
  if (f.out) c.out = *f.out;
  if (f.cache_dir) c.cache_dir = *f.cache_dir;
  if (f.policy) {
    try {
      c.policy = parse_policy(*f.policy);
    } catch (const std::exception&) {
      throw UsageError("unknown policy '" + *f.policy + "'");
    }
  }
  if (f.time_limit) c.time_limit = *f.time_limit;
  c.annotate = f.annotate;
  validate(c);
  return c;
}

void emit(const JobConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.out, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(c.out + ": cannot open for writing");
  out << text;
  if (!out) throw IoError(c.out + ": write failed");
}

int run(const JobConfig& c, bool verify, bool quiet) {
  RunOptions o = run_options_from(c);
  o.verify_reference = verify;
  if (!quiet) o.log = [](const std::string& s) { std::cerr << "tautring: " << s << "\n"; };
  if (c.command == "house") {
    int d = c.dim >= 0 ? c.dim : HouseSpec::default_dim(c.genus);
    auto spec = HouseSpec::make(c.genus, d);
    HouseFormat hf = c.format == OutputFormat::Svg ? HouseFormat::Svg : HouseFormat::Text;
    if (!c.annotate) {
      emit(c, house_render(spec, nullptr, hf));
      return kOk;
    }
    auto table = run_house_dims(o);
    emit(c, house_render(spec, &table, hf));
    return table.complete ? kOk : kResource;
  }
  if (c.command == "sympow") {
    auto r = run_sympow(o, c.n);
    if (c.format == OutputFormat::Json) emit(c, sympow_json(r));
    else if (c.format == OutputFormat::Csv) emit(c, sympow_csv(r));
    else emit(c, sympow_text(r));
    return kOk;
  }
  if (c.command == "pairing" && c.max_codim >= 0 && c.max_codim < socle_codim(o.mode, c.genus))
    throw UsageError("pairing needs --max-codim at least the socle codimension " +
                     std::to_string(socle_codim(o.mode, c.genus)));
  auto rep = run_analysis(o);
  if (c.format == OutputFormat::Json) emit(c, report_json(rep));
  else if (c.format == OutputFormat::Csv) emit(c, report_csv(rep.table));
  else emit(c, report_text(rep));
  if (!rep.table.complete) {
    std::cerr << "tautring: partial result, stopped after codim " << rep.table.completed_codim << "\n";
    return kResource;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensions, socles and pairings of tautological rings of curves and their Jacobians"};
  app.require_subcommand(1);
  Flags f;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const char* name : {"compute", "pairing", "house", "sympow", "mg"}) {
    std::string desc = std::string(name) == "compute"   ? "dimension table of a ring"
                       : std::string(name) == "pairing" ? "socle and pairing report"
                       : std::string(name) == "house"   ? "diagram of the legal bidegrees"
                       : std::string(name) == "sympow"  ? "symmetric power of the universal curve"
                                                        : "ring of kappa classes on M_g";
    auto* sub = app.add_subcommand(name, desc);
    add_common(sub, f);
    subs.emplace_back(name, sub);
  }
  subs[2].second->add_option("--dim", f.dim, "base dimension d (default 3g - 2)");
  subs[2].second->add_flag("--annotate", f.annotate, "write the dimension of each computed block");
  subs[3].second->add_option("--n", f.n, "number of points, at least 2g - 1");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  std::string command;
  for (auto& [name, sub] : subs)
    if (sub->parsed()) command = name;
  try {
    JobConfig c = build_config(command, f);
    return run(c, f.verify, f.quiet);
  } catch (const UsageError& e) {
    std::cerr << "tautring: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "tautring: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "tautring: " << e.what() << "\n";
    return kUsage;
  } catch (const IntegrityError& e) {
    std::cerr << "tautring: integrity error: " << e.what() << "\n";
    return kIntegrity;
  } catch (const ResourceAbort& e) {
    std::cerr << "tautring: " << e.what() << "\n";
    return kResource;
  } catch (const IoError& e) {
    std::cerr << "tautring: " << e.what() << "\n";
    return 1;
  }
}
