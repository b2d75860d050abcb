#include "tautring/report.hpp"

#include <sstream>

#include "json.hpp"

namespace tautring {

using nlohmann::ordered_json;

namespace {

ordered_json engine_json(const EngineInfo& e) {
  ordered_json j;
  j["version"] = e.version;
  j["primes_seed"] = e.primes_seed;
  j["nu_policy"] = e.nu_policy;
  j["linalg"] = e.linalg;
  j["primes"] = e.primes;
  return j;
}

ordered_json socle_json(const SocleInfo& s) {
  ordered_json loc = ordered_json::array();
  for (Bidegree b : s.location) loc.push_back({b.i, b.j});
  return {{"codim", s.codim}, {"dim", s.dim}, {"location", loc}};
}

ordered_json pairings_json(const PairingReport& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : p.pairings)
    arr.push_back({{"codim", r.codim},
                   {"dim_left", r.dim_left},
                   {"dim_right", r.dim_right},
                   {"rank", r.rank},
                   {"missing_left", r.missing_left},
                   {"missing_right", r.missing_right}});
  return arr;
}

}  // namespace

std::string report_json(const AnalysisReport& r) {
  const auto& t = r.table;
  ordered_json j;
  j["genus"] = t.genus;
  j["mode"] = to_string(t.mode);
  ordered_json dims = ordered_json::array();
  for (const auto& d : t.records)
    dims.push_back({{"bidegree", {d.bidegree.i, d.bidegree.j}},
                    {"codim", d.codim},
                    {"monomials", d.monomials},
                    {"relation_rank", d.relation_rank},
                    {"dim", d.dim}});
  j["dimensions"] = std::move(dims);
  if (r.pairing) {
    j["socle"] = socle_json(r.pairing->socle);
    j["pairings"] = pairings_json(*r.pairing);
    j["gorenstein"] = r.pairing->gorenstein;
    j["reason"] = r.pairing->reason.empty() ? ordered_json(nullptr) : ordered_json(r.pairing->reason);
    j["missing"] = r.pairing->missing_lines();
  } else {
    j["socle"] = nullptr;
    j["pairings"] = ordered_json::array();
    j["gorenstein"] = false;
    j["reason"] = "table does not reach the socle codimension " + std::to_string(socle_codim(t.mode, t.genus));
    j["missing"] = ordered_json::array();
  }
  j["max_codim"] = t.max_codim;
  j["completed_codim"] = t.completed_codim;
  j["complete"] = t.complete;
  j["engine"] = engine_json(r.engine);
  return j.dump(2) + "\n";
}

std::string report_csv(const DimensionTable& t) {
  std::ostringstream out;
  out << "i,j,codim,monomials,relation_rank,dim\n";
  for (const auto& d : t.records)
    out << d.bidegree.i << "," << d.bidegree.j << "," << d.codim << "," << d.monomials << "," << d.relation_rank << ","
        << d.dim << "\n";
  return out.str();
}

std::string report_text(const AnalysisReport& r) {
  const auto& t = r.table;
  std::ostringstream out;
  out << "genus " << t.genus << ", mode " << to_string(t.mode) << "\n";
  auto dims = t.dims_by_codim();
  for (std::size_t c = 0; c < dims.size(); ++c) out << "codim " << c << ": dim " << dims[c] << "\n";
  if (!t.complete)
    out << "incomplete: stopped after codim " << t.completed_codim << " of " << t.max_codim << "\n";
  if (r.pairing) {
    const auto& p = *r.pairing;
    out << "socle: codim " << p.socle.codim << ", dim " << p.socle.dim;
    if (t.mode == Mode::TTilde)
      for (Bidegree b : p.socle.location) out << " at " << b.to_string();
    out << "\n";
    for (const auto& line : p.missing_lines()) out << line << "\n";
    out << "gorenstein: " << (p.gorenstein ? "true" : "false");
    if (!p.gorenstein) out << " (" << p.reason << ")";
    out << "\n";
  }
  return out.str();
}

std::string sympow_json(const SympowReport& r) {
  ordered_json j;
  j["genus"] = r.genus;
  j["mode"] = "sympow";
  j["n"] = r.n;
  ordered_json dims = ordered_json::array();
  for (std::size_t d = 0; d < r.dims.size(); ++d) dims.push_back({{"degree", d}, {"dim", r.dims[d]}});
  j["dimensions"] = std::move(dims);
  j["socle"] = {{"degree", r.socle_degree}, {"dim", r.socle_dim}};
  j["gorenstein"] = r.transfer.gorenstein;
  j["defects"] = r.transfer.defects;
  j["note"] = r.transfer.note;
  j["ttilde"] = {{"socle", socle_json(r.ttilde.socle)},
                 {"pairings", pairings_json(r.ttilde)},
                 {"gorenstein", r.ttilde.gorenstein}};
  j["engine"] = engine_json(r.engine);
  return j.dump(2) + "\n";
}

std::string sympow_csv(const SympowReport& r) {
  std::ostringstream out;
  out << "degree,dim\n";
  for (std::size_t d = 0; d < r.dims.size(); ++d) out << d << "," << r.dims[d] << "\n";
  return out.str();
}

std::string sympow_text(const SympowReport& r) {
  std::ostringstream out;
  out << "genus " << r.genus << ", n = " << r.n << "\n";
  for (std::size_t d = 0; d < r.dims.size(); ++d) out << "degree " << d << ": dim " << r.dims[d] << "\n";
  out << "socle: degree " << r.socle_degree << ", dim " << r.socle_dim << "\n";
  for (const auto& d : r.transfer.defects) out << d << "\n";
  out << "gorenstein: " << (r.transfer.gorenstein ? "true" : "false") << "\n";
  out << "note: " << r.transfer.note << "\n";
  return out.str();
}

}  // namespace tautring
