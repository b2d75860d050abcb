#include "tautring/cache.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "tautring/version.hpp"

namespace tautring {

using nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::string CacheKey::text() const {
  return "g=" + std::to_string(genus) + ";mode=" + to_string(mode) + ";b=" + bidegree.to_string() +
         ";field=" + field + ";format=" + std::to_string(format_version) + ";engine=" + engine_version;
}

std::string CacheKey::digest() const { return sha256_hex(text()); }

CacheKey make_cache_key(int genus, Mode mode, Bidegree b, const std::string& field) {
  return {genus, mode, b, field, kCacheFormatVersion, kEngineVersion};
}

namespace {

ordered_json body_json(const AlgebraContext& ctx, const RelationBasis& rb) {
  ordered_json j;
  j["genus"] = rb.genus;
  j["mode"] = to_string(rb.mode);
  j["field"] = rb.field;
  j["bidegree"] = {rb.bidegree.i, rb.bidegree.j};
  ordered_json monos = ordered_json::array();
  for (const auto& m : rb.monomials) monos.push_back(ctx.to_string(m));
  j["monomials"] = std::move(monos);
  j["pivots"] = rb.pivots;
  ordered_json rows = ordered_json::array();
  for (const auto& row : rb.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& [c, v] : row) r.push_back({c, v});
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["closure_rank"] = rb.closure_rank;
  j["pure_rank"] = rb.pure_rank;
  ordered_json prov = ordered_json::array();
  for (const auto& p : rb.provenance)
    prov.push_back({{"kind", p.kind},
                    {"source", ctx.to_string(p.source)},
                    {"nu", p.nu},
                    {"multiplier", ctx.to_string(p.multiplier)}});
  j["provenance"] = std::move(prov);
  return j;
}

}  // namespace

std::string relation_basis_to_json(const AlgebraContext& ctx, const RelationBasis& rb) {
  ordered_json j;
  j["format_version"] = kCacheFormatVersion;
  j["engine_version"] = kEngineVersion;
  ordered_json body = body_json(ctx, rb);
  std::string dumped = body.dump();
  j["checksum"] = sha256_hex(dumped);
  j["basis"] = std::move(body);
  return j.dump() + "\n";
}

RelationBasis relation_basis_from_json(const AlgebraContext& ctx, const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw IntegrityError(std::string("cache entry is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kCacheFormatVersion) throw IntegrityError("cache format version mismatch");
    const auto& body = j.at("basis");
    if (sha256_hex(body.dump()) != j.at("checksum").get<std::string>()) throw IntegrityError("cache checksum mismatch");
    RelationBasis rb;
    rb.genus = body.at("genus").get<int>();
    if (rb.genus != ctx.genus()) throw IntegrityError("cache entry genus mismatch");
    rb.mode = parse_mode(body.at("mode").get<std::string>());
    rb.field = body.at("field").get<std::string>();
    rb.bidegree = {body.at("bidegree").at(0).get<int>(), body.at("bidegree").at(1).get<int>()};
    for (const auto& m : body.at("monomials")) rb.monomials.push_back(ctx.parse_monomial(m.get<std::string>()));
    rb.pivots = body.at("pivots").get<std::vector<std::uint32_t>>();
    for (const auto& row : body.at("rows")) {
      std::vector<std::pair<std::uint32_t, std::string>> r;
      for (const auto& e : row) r.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::string>());
      rb.rows.push_back(std::move(r));
    }
    rb.closure_rank = body.at("closure_rank").get<std::size_t>();
    rb.pure_rank = body.at("pure_rank").get<std::size_t>();
    for (const auto& p : body.at("provenance"))
      rb.provenance.push_back({p.at("kind").get<std::string>(), ctx.parse_monomial(p.at("source").get<std::string>()),
                               p.at("nu").get<int>(), ctx.parse_monomial(p.at("multiplier").get<std::string>())});
    return rb;
  } catch (const IntegrityError&) {
    throw;
  } catch (const std::exception& e) {
    throw IntegrityError(std::string("malformed cache entry: ") + e.what());
  }
}

RelationCache::RelationCache(std::filesystem::path dir, std::function<void(const std::string&)> warn)
    : dir_(std::move(dir)), warn_(std::move(warn)) {
  if (!warn_) warn_ = [](const std::string& s) { std::cerr << "warning: " << s << "\n"; };
}

std::filesystem::path RelationCache::path_for(const CacheKey& key) const {
  std::string d = key.digest();
  return dir_ / d.substr(0, 2) / (d + ".json");
}

std::optional<RelationBasis> RelationCache::get(const AlgebraContext& ctx, const CacheKey& key) {
  auto path = path_for(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ++misses_;
    return std::nullopt;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    RelationBasis rb = relation_basis_from_json(ctx, ss.str());
    if (rb.mode != key.mode || rb.bidegree != key.bidegree || rb.field != key.field)
      throw IntegrityError("cache entry does not match its key");
    ++hits_;
    return rb;
  } catch (const IntegrityError& e) {
    ++corrupt_;
    ++misses_;
    warn_(path.string() + ": " + e.what() + "; recomputing");
    return std::nullopt;
  }
}

void RelationCache::put(const AlgebraContext& ctx, const CacheKey& key, const RelationBasis& rb) {
  auto path = path_for(key);
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out << relation_basis_to_json(ctx, rb);
    if (!out) throw IoError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
}

}  // namespace tautring
